import pytest

from modules.core import FiniteIndexedHyperspace
from modules.settings import Settings, set_settings


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts from the documented defaults, whatever the environment says"""
    set_settings(Settings())
    yield
    set_settings(None)


@pytest.fixture
def square():
    """The 2-cube over a 2-element set: elements 0..3, E_0 splits {0,1}|{2,3}, E_1 splits {0,2}|{1,3}"""
    return FiniteIndexedHyperspace(2, 4, ((0, 0, 1, 1), (0, 1, 0, 1)))


@pytest.fixture
def write_file(tmp_path):
    def write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
