from pathlib import Path

import pytest

from memsys.loader import load_system

DATA = Path(__file__).resolve().parents[1] / "src" / "memsys" / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def maj1():
    return load_system(DATA / "maj1.json")


@pytest.fixture(scope="session")
def even2():
    return load_system(DATA / "even2.json")


@pytest.fixture(scope="session")
def pred3():
    return load_system(DATA / "pred3.json")


@pytest.fixture(scope="session")
def fixtures(maj1, even2, pred3):
    return {"maj1": maj1, "even2": even2, "pred3": pred3}
