"""
Shared fixtures
"""
import json

import numpy as np
import pytest

from modules.data_loader import parse_tensor_document
from modules.interval import IntervalTensor
from modules.spectra import SolverOptions
from modules.tensor_core import DenseTensor, Symmetry


@pytest.fixture
def fast_options():
    """Fewer random starts; basis starts still run"""
    return SolverOptions(starts=8)


@pytest.fixture
def closure():
    """rep -> value dict (1-based index strings like '1123') -> symmetric DenseTensor"""
    def build(values, order=4, dim=3):
        doc = {
            "order": order,
            "dim": dim,
            "format": "coo",
            "symmetric_closure": True,
            "entries": [{"idx": [int(c) for c in rep], "value": v} for rep, v in values.items()],
        }
        return parse_tensor_document(doc)
    return build


@pytest.fixture
def delta_1111_interval():
    """zero center, radius 1 at (1,1,1,1) only"""
    radius = np.zeros((3,) * 4)
    radius[0, 0, 0, 0] = 1.0
    return IntervalTensor(
        DenseTensor(np.zeros((3,) * 4), Symmetry.TRUE),
        DenseTensor(radius, Symmetry.TRUE),
    )


@pytest.fixture
def write_json(tmp_path):
    def write(doc, name="input.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return write
