import os

import pytest

from app.config import Config
from app.services.codebook import build_codebook

RESOURCES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "app", "resources")


def resource(name: str) -> str:
    return os.path.join(RESOURCES, name)


def amino_acids() -> list[str]:
    with open(resource("amino_acids.txt"), "r", encoding="utf-8") as file:
        return [line.strip() for line in file if line.strip()]


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Every test sees a fresh Config built from an environment without FOGE_* overrides."""
    for key in list(os.environ):
        if key.startswith("FOGE_"):
            monkeypatch.delenv(key, raising=False)
    Config.reset()
    yield
    Config.reset()


@pytest.fixture(scope="session")
def unitary_codebook():
    """d=2048 codebook with unit spectral magnitudes, so every unbinding is exact."""
    return build_codebook(2048, 1, 64, 16, unitary=True, attributes=amino_acids())


@pytest.fixture(scope="session")
def wide_codebook():
    return build_codebook(4096, 1, 64, 16, unitary=True)


@pytest.fixture(scope="session")
def gaussian_codebook():
    return build_codebook(2048, 1, 64, 16, attributes=amino_acids())


@pytest.fixture
def resource_path():
    return resource


@pytest.fixture(scope="session")
def amino_keys():
    return amino_acids()
