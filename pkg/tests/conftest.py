import random
import sys
from pathlib import Path

import pytest
from loguru import logger

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.exact_ring import HADAMARD, Mat2, Qr2  # noqa: E402
from core.walk_paths import PHI_STAR  # noqa: E402


@pytest.fixture(autouse=True)
def quiet_logs():
    """Keep loguru off the captured stderr unless a test asks for it."""
    logger.remove()
    yield
    logger.remove()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def hadamard() -> Mat2:
    return HADAMARD


@pytest.fixture
def phi_star():
    return PHI_STAR


def random_qr2(rng: random.Random, bound: int = 9) -> Qr2:
    return Qr2(
        f"{rng.randint(-bound, bound)}/{rng.randint(1, bound)}",
        f"{rng.randint(-bound, bound)}/{rng.randint(1, bound)}",
    )


def random_mat2(rng: random.Random) -> Mat2:
    return Mat2(*(random_qr2(rng) for _ in range(4)))


@pytest.fixture
def config_file(tmp_path):
    def write(text: str) -> Path:
        path = tmp_path / "config.yaml"
        path.write_text(text)
        return path

    return write
