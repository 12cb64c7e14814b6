import hypothesis
import hypothesis.strategies as st
import numpy as np
from hypothesis.extra.numpy import arrays

hypothesis.settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.load_profile("suite")

_FLOATS = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False, width=64)


@st.composite
def square_matrices(draw, max_dim=6):
    d = draw(st.integers(1, max_dim))
    re = draw(arrays(np.float64, (d, d), elements=_FLOATS))
    im = draw(arrays(np.float64, (d, d), elements=_FLOATS))
    return re + 1j * im


@st.composite
def square_matrix_pairs(draw, max_dim=6):
    d = draw(st.integers(1, max_dim))
    mats = []
    for _ in range(2):
        re = draw(arrays(np.float64, (d, d), elements=_FLOATS))
        im = draw(arrays(np.float64, (d, d), elements=_FLOATS))
        mats.append(re + 1j * im)
    return mats[0], mats[1]


@st.composite
def hermitian_matrices(draw, max_dim=8):
    m = draw(square_matrices(max_dim=max_dim))
    return (m + m.conj().T) / 2


@st.composite
def unit_vectors(draw, dim=None, max_dim=8):
    d = dim if dim is not None else draw(st.integers(1, max_dim))
    re = draw(arrays(np.float64, (d,), elements=_FLOATS))
    im = draw(arrays(np.float64, (d,), elements=_FLOATS))
    v = re + 1j * im
    nrm = np.linalg.norm(v)
    hypothesis.assume(nrm > 1e-3)
    return v / nrm


@st.composite
def projector_state_pairs(draw, max_dim=6):
    """Random rank-r projector (conjugated diagonal) with a matching state."""
    d = draw(st.integers(1, max_dim))
    r = draw(st.integers(1, d))
    re = draw(arrays(np.float64, (d, d), elements=_FLOATS))
    im = draw(arrays(np.float64, (d, d), elements=_FLOATS))
    m = re + 1j * im
    _, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    cols = vecs[:, :r]
    e = cols @ cols.conj().T
    psi = draw(unit_vectors(dim=d))
    return e, psi


def random_hermitian(rng, d, scale=1.0):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (m + m.conj().T) / 2
