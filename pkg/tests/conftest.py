import numpy as np
import pytest


def orth_basis(A, rtol=None):
    """Orthonormal basis of the column space, truncated at numerical rank."""
    U, s, _ = np.linalg.svd(np.asarray(A, float), full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return U[:, :0]
    tol = (rtol if rtol is not None else max(A.shape) * np.finfo(float).eps) * s[0]
    return U[:, s > tol]


def principal_angle(A, B):
    """Largest principal angle between the column spaces of A and B."""
    Qa, Qb = orth_basis(A), orth_basis(B)
    if Qa.shape[1] != Qb.shape[1]:
        return np.pi / 2
    sv = np.linalg.svd(Qa.T @ Qb, compute_uv=False)
    return float(np.arccos(np.clip(sv.min(), -1.0, 1.0)))


def nonzero_columns(X, tol=1e-6):
    return set(np.nonzero(np.linalg.norm(X, axis=0) > tol)[0])


@pytest.fixture
def helpers():
    class H:
        pass

    H.orth_basis = staticmethod(orth_basis)
    H.principal_angle = staticmethod(principal_angle)
    H.nonzero_columns = staticmethod(nonzero_columns)
    return H
