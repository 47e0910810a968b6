"""Shared fixtures: contexts at the reference base q = 0.5."""
from __future__ import annotations

import numpy as np
import pytest

from qhaar import QContext


@pytest.fixture(scope="session")
def ctx() -> QContext:
    return QContext(0.5)


@pytest.fixture(scope="session")
def ctx2(ctx: QContext) -> QContext:
    # base q^2 = 0.25, the base most closed forms live in
    return ctx.squared()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)
