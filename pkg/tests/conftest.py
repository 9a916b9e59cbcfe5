import pytest

from relgt.classes import HypersurfaceModel, ManifoldModel
from relgt.lattice import IntegralLattice, LatticeClass


def blowup_lattice(m):
    """<1> + m<-1> with labels h, E1..Em."""
    gram = [[0] * (m + 1) for _ in range(m + 1)]
    gram[0][0] = 1
    for i in range(1, m + 1):
        gram[i][i] = -1
    return IntegralLattice(gram, ["h"] + [f"E{i}" for i in range(1, m + 1)])


def blowup_model(m, flags=()):
    L = blowup_lattice(m)
    K = LatticeClass([-3] + [1] * m)
    return ManifoldModel(lattice=L, K=K, flags=frozenset(flags))


@pytest.fixture
def M2():
    return blowup_model(2)


@pytest.fixture
def V2(M2):
    v = M2.lattice.class_from_labels({"h": 2, "E1": -1, "E2": -1})
    return HypersurfaceModel.create(M2, v, genus=0)
