"""Ambient space of single-fermion operators and Clifford generator bookkeeping.

The basis of the mixing space C^{2n} is fixed once and for all as
(c_1, ..., c_n, c_1^dagger, ..., c_n^dagger).  In this order the
anti-commutator {v, w} = v^T B w has the block matrix B = [[0, 1], [1, 0]],
and particle-hole conjugation acts as coordinate-wise complex conjugation
followed by the same swap matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InputError, ValidationError
from .tolerances import ALG_TOL


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NambuSpace:
    """The space C^{2n} spanned by n annihilation and n creation operators.

    Parameters
    ----------
    n : int
        Number of bands.  The space has complex dimension ``2 * n``.

    Attributes
    ----------
    bracket_matrix : ndarray
        Symmetric matrix B of the canonical anti-commutator, {v, w} = v^T B w.
    gamma_matrix : ndarray
        Matrix G such that particle-hole conjugation is v -> G conj(v).
    majorana_transform : ndarray
        Unitary Omega mapping (c, c^dagger) coordinates to Majorana
        coordinates, in which the bracket becomes the Euclidean form.
    """

    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InputError("band count n must be a positive integer")

    @property
    def dim(self) -> int:
        return 2 * self.n

    @cached_property
    def bracket_matrix(self) -> np.ndarray:
        n = self.n
        B = np.zeros((2 * n, 2 * n))
        B[:n, n:] = np.eye(n)
        B[n:, :n] = np.eye(n)
        return _frozen(B)

    @cached_property
    def gamma_matrix(self) -> np.ndarray:
        # gamma swaps c_i and c_i^dagger, so its matrix coincides with B
        return self.bracket_matrix

    @cached_property
    def majorana_transform(self) -> np.ndarray:
        n = self.n
        eye = np.eye(n)
        top = np.hstack([eye, eye])
        bot = np.hstack([1j * eye, -1j * eye])
        return _frozen(np.vstack([top, bot]) / np.sqrt(2.0))


def make_nambu(n: int) -> NambuSpace:
    """Build the canonical ambient space for ``n`` bands."""
    return NambuSpace(int(n))


def _check_vector(space: NambuSpace, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (space.dim,):
        raise InputError(
            f"vector has shape {v.shape}, expected ({space.dim},)")
    return v


def bracket(space: NambuSpace, v, w) -> complex:
    """Canonical anti-commutator {v, w} = v^T B w (bilinear, symmetric)."""
    v = _check_vector(space, v)
    w = _check_vector(space, w)
    return complex(v @ space.bracket_matrix @ w)


def apply_gamma(space: NambuSpace, v) -> np.ndarray:
    """Particle-hole conjugation gamma(v) = G conj(v), an anti-linear involution."""
    v = _check_vector(space, v)
    return space.gamma_matrix @ np.conj(v)


def classify_generator(space: NambuSpace, U, tol: float = ALG_TOL) -> str:
    """Classify a matrix by its action on the anti-commutator bracket.

    Returns
    -------
    str
        ``"real"`` if U^T B U = B, ``"imaginary"`` if U^T B U = -B,
        ``"neither"`` for a unitary satisfying neither relation, and
        ``"not_unitary"`` otherwise.  Only the bracket is tested here;
        the Clifford condition U^2 = -1 is enforced by :class:`CliffordSet`.
    """
    U = np.asarray(U, dtype=complex)
    d = space.dim
    if U.shape != (d, d):
        raise InputError(f"matrix has shape {U.shape}, expected ({d}, {d})")
    if np.abs(U.conj().T @ U - np.eye(d)).max() > tol:
        return "not_unitary"
    B = space.bracket_matrix
    M = U.T @ B @ U
    if np.abs(M - B).max() < tol:
        return "real"
    if np.abs(M + B).max() < tol:
        return "imaginary"
    return "neither"


@dataclass(frozen=True, eq=False)
class Generator(object):
    """A unitary Clifford generator tagged by its bracket parity.

    The constructor checks unitarity, the squaring relation
    ``matrix @ matrix = -1``, and that the declared parity matches the
    action on the bracket (``"real"`` preserves it, ``"imaginary"`` flips
    the sign).
    """

    matrix: np.ndarray
    parity: str

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise InputError("generator matrix must be square of even dimension")
        if self.parity not in ("real", "imaginary"):
            raise InputError(f"unknown parity tag {self.parity!r}")
        object.__setattr__(self, "matrix", _frozen(M))
        d = M.shape[0]
        if np.abs(M.conj().T @ M - np.eye(d)).max() > ALG_TOL:
            raise ValidationError("generator matrix is not unitary")
        if np.abs(M @ M + np.eye(d)).max() > ALG_TOL:
            raise ValidationError("generator must square to minus the identity")
        got = classify_generator(NambuSpace(d // 2), M)
        if got != self.parity:
            raise ValidationError(
                f"declared parity {self.parity!r} but bracket action is {got!r}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class CliffordSet(object):
    """An ordered collection of generators on a common ambient space.

    The constructor checks dimensions and parity bookkeeping only.  The
    Clifford relations themselves are verified by :func:`check_clifford`,
    which is report-valued so that broken sets can be inspected.
    """

    space: NambuSpace
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for i, g in enumerate(gens):
            if not isinstance(g, Generator):
                raise InputError(f"generator {i} is not a Generator")
            if g.dim != self.space.dim:
                raise InputError(
                    f"generator {i} has dimension {g.dim}, "
                    f"expected {self.space.dim}")

    @property
    def signature(self):
        """Pair (number of real generators, number of imaginary generators)."""
        r = sum(1 for g in self.generators if g.parity == "real")
        return (r, len(self.generators) - r)

    def __len__(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class CliffordReport:
    """Outcome of a Clifford relation check.

    ``violations`` lists triples ``(l, m, deviation)``; an entry with
    ``l == m`` is a failed squaring relation, ``l < m`` a failed
    anti-commutator.  An empty list means all relations hold.
    """

    max_deviation: float
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def check_clifford(cset: CliffordSet, tol: float = ALG_TOL) -> CliffordReport:
    """Verify J_l J_m + J_m J_l = -2 delta_lm on all generator pairs."""
    gens = cset.generators
    eye = np.eye(cset.space.dim)
    worst = 0.0
    bad = []
    for l, gl in enumerate(gens):
        for m in range(l, len(gens)):
            gm = gens[m]
            acom = gl.matrix @ gm.matrix + gm.matrix @ gl.matrix
            target = -2.0 * eye if l == m else 0.0
            dev = float(np.abs(acom - target).max())
            worst = max(worst, dev)
            if dev > tol:
                bad.append((l, m, dev))
    return CliffordReport(max_deviation=worst, violations=tuple(bad))
