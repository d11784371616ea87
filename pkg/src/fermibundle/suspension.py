"""The suspension map taking a bundle over S^d to one over S^{d+1}.

One imaginary generator K of the Clifford set drives a one-parameter
rotation of each fiber.  At polar angle t the fiber is
exp((t/2) K J(A_k)) applied to the equator fiber A_k; at t = +-pi/2 every
fiber collapses onto the eigenplane of K with eigenvalue -+i, which is
what makes the construction close up into a sphere.  K is consumed in the
process: the output Clifford set is the input set without it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bundles import Bundle, make_sphere_grid
from .errors import InputError, ValidationError
from .nambu import CliffordSet, Generator, make_nambu
from .planes import Plane, j_of, pseudo_check, vacuum_plane
from .symmetry import class_info, imaginary_realization, true_symmetries
from .tolerances import ALG_TOL

_REAL_SEQUENCE = ("D", "DIII", "AII", "CII", "C", "CI", "AI", "BDI")
_COMPLEX_SEQUENCE = ("A", "AIII")


def rotor(K, A: Plane, t: float) -> np.ndarray:
    """Rotation exp((t/2) K J(A)) in closed form.

    Parameters
    ----------
    K : Generator or ndarray
        An imaginary pseudo-symmetry of the plane.
    A : Plane
        The plane being rotated; J(A) is its complex structure.
    t : float
        Rotation angle; the suspension uses t in [-pi/2, pi/2].

    Returns
    -------
    ndarray
        The unitary cos(t/2) 1 + sin(t/2) K J(A).  The closed form is
        exact because K J(A) squares to minus the identity whenever K
        maps A onto its orthogonal complement; both facts are checked.

    Raises
    ------
    ValidationError
        If K is not a pseudo-symmetry of A.
    """
    M = K.matrix if isinstance(K, Generator) else np.asarray(K, dtype=complex)
    dev = pseudo_check(M, A)
    if dev > ALG_TOL:
        raise ValidationError(
            f"rotation generator is not a pseudo-symmetry of the plane "
            f"(deviation {dev:.3e})")
    KJ = M @ j_of(A)
    dim = KJ.shape[0]
    if np.abs(KJ @ KJ + np.eye(dim)).max() > 1e-8:
        raise ValidationError("K J(A) does not square to minus the identity")
    return math.cos(t / 2) * np.eye(dim) + math.sin(t / 2) * KJ


@dataclass(frozen=True, eq=False)
class SuspensionInput:
    """A bundle together with the generator choices for one suspension.

    ``k_index`` names the imaginary generator to be consumed; the optional
    ``i_index`` names a real generator that is kept and moved to the end
    of the output set.  Construction verifies the algebraic requirements
    (parities, anti-commutation with the rest of the set) and that every
    fiber is a pseudo-symmetric plane for the designated generators.
    """

    bundle: Bundle
    k_index: int
    i_index: int | None = None

    def __post_init__(self):
        gens = self.bundle.cset.generators
        if not 0 <= self.k_index < len(gens):
            raise InputError(
                f"k_index {self.k_index} out of range for {len(gens)} generators")
        if self.i_index is not None:
            if not 0 <= self.i_index < len(gens):
                raise InputError(
                    f"i_index {self.i_index} out of range for {len(gens)} "
                    "generators")
            if self.i_index == self.k_index:
                raise InputError("i_index must differ from k_index")
        K = gens[self.k_index]
        if K.parity != "imaginary":
            raise ValidationError("the consumed generator must be imaginary")
        if self.i_index is not None and gens[self.i_index].parity != "real":
            raise ValidationError("the retained generator must be real")
        for m, g in enumerate(gens):
            if m == self.k_index:
                continue
            dev = np.abs(K.matrix @ g.matrix + g.matrix @ K.matrix).max()
            if dev > ALG_TOL:
                raise ValidationError(
                    f"consumed generator does not anti-commute with "
                    f"generator {m} (deviation {dev:.3e})")
        checked = [K] if self.i_index is None else [K, gens[self.i_index]]
        bad = []
        for p, A in enumerate(self.bundle.fibers):
            dev = max(pseudo_check(g, A) for g in checked)
            if dev > ALG_TOL:
                bad.append((p, dev))
        if bad:
            head = ", ".join(f"{p} ({dev:.3e})" for p, dev in bad[:4])
            more = "" if len(bad) <= 4 else f" and {len(bad) - 4} more"
            raise ValidationError(
                f"fibers are not pseudo-symmetric for the designated "
                f"generators at points {head}{more}")

    @property
    def K(self) -> Generator:
        return self.bundle.cset.generators[self.k_index]

    @property
    def I_gen(self) -> Generator | None:
        if self.i_index is None:
            return None
        return self.bundle.cset.generators[self.i_index]


def _next_label(label):
    if label is None:
        return None
    info = class_info(label)
    if info.sector == "real":
        return _REAL_SEQUENCE[(info.s + 1) % 8]
    return _COMPLEX_SEQUENCE[(info.s + 1) % 2]


def _consumed_set(inp: SuspensionInput) -> tuple:
    gens = inp.bundle.cset.generators
    kept = [g for m, g in enumerate(gens)
            if m not in (inp.k_index, inp.i_index)]
    if inp.i_index is not None:
        kept.append(gens[inp.i_index])
    return tuple(kept)


def _eigenplanes(space, K: Generator):
    """South (E_{+i}) and north (E_{-i}) eigenplane frames of K."""
    H = 1j * K.matrix
    w, V = np.linalg.eigh(H)
    n = space.n
    if np.count_nonzero(w < 0) != n:
        raise ValidationError("K has unbalanced eigenvalues")
    return Plane(space, V[:, :n]), Plane(space, V[:, n:])


def default_row_count(N: int) -> int:
    """Default interior row count for suspending an N-column circle."""
    m = N // 2 + 1
    return m if m % 2 else m + 1


def suspend(inp: SuspensionInput, points: int = 64,
            rows: int | None = None) -> Bundle:
    """Suspend a bundle over S^d into one over S^{d+1}.

    For d = 0 the two input fibers seed the eastern (|k| <= pi/2) and
    western arcs of a circle of ``points`` momenta.  For d = 1 each
    equator fiber is rotated through ``rows`` interior latitude rows
    (default :func:`default_row_count`, odd so the t = 0 row reproduces
    the input exactly), and the poles are set to the eigenplanes of K.
    The output class label, when the input carries one, advances by one
    step along the Bott sequence.
    """
    b = inp.bundle
    K = inp.K
    space = b.space
    out_gens = _consumed_set(inp)
    label = _next_label(b.label)
    if b.grid.d == 0:
        N = points
        if N is None or N < 2 or N % 2:
            raise InputError("suspension to a circle needs an even point count")
        grid = make_sphere_grid(1, N)
        A_east, A_west = b.fibers
        fibers = []
        for k in grid.points[:, 0]:
            if abs(k) <= math.pi / 2 + 1e-12:
                t, seed = k, A_east
            else:
                t, seed = math.copysign(math.pi - abs(k), k), A_west
            if t == 0.0:
                fibers.append(seed)
            else:
                fibers.append(Plane(space, rotor(K, seed, t) @ seed.frame))
        return Bundle(space, CliffordSet(space, out_gens), grid,
                      tuple(fibers), label)
    if b.grid.d == 1:
        if b.rank != space.n:
            raise InputError("suspension to a sphere needs half-rank fibers")
        N = b.grid.N
        M = default_row_count(N) if rows is None else rows
        if M < 1 or M % 2 == 0:
            raise InputError("interior row count must be odd")
        grid = make_sphere_grid(2, N, M)
        south, north = _eigenplanes(space, K)
        fibers = [None] * grid.size
        for j in range(M):
            t = grid.points[j * N, 1]
            for i in range(N):
                A = b.fibers[i]
                if t == 0.0:
                    fibers[j * N + i] = A
                else:
                    fibers[j * N + i] = Plane(space, rotor(K, A, t) @ A.frame)
        fibers[grid.size - 2] = south
        fibers[grid.size - 1] = north
        return Bundle(space, CliffordSet(space, out_gens), grid,
                      tuple(fibers), label)
    raise InputError("suspension is supported for d = 0 and d = 1 inputs")


# ---------------------------------------------------------------------------
# worked examples

def example_majorana(occupied_at_zero: bool = True, N: int = 64) -> Bundle:
    """Circle bundle of the superconducting chain with a boundary mode.

    The input data put the line span{c^dagger} (or span{c} for the
    trivial variant) at k = 0 and the vacuum line span{c} at k = pi.
    Suspension with the single imaginary generator i gamma produces the
    class-D bundle whose fiber at k is span{c^dagger cos(k/2) - c sin(k/2)}.
    """
    sp = make_nambu(1)
    cset = imaginary_realization(sp, "BDI")
    grid0 = make_sphere_grid(0)
    c_line = vacuum_plane(sp)
    cdag_line = Plane(sp, np.array([[0.0], [1.0]], dtype=complex))
    A0 = cdag_line if occupied_at_zero else c_line
    b0 = Bundle(sp, cset, grid0, (A0, c_line), "BDI")
    return suspend(SuspensionInput(b0, 0), points=N)


def _diii_equator_frame(k: float) -> np.ndarray:
    a = k / 2
    plus = np.array([-math.sin(a), math.sin(a), math.cos(a), math.cos(a)])
    minus = np.array([-math.sin(a), -math.sin(a), math.cos(a), -math.cos(a)])
    return np.column_stack([plus, minus]).astype(complex) / math.sqrt(2)


def example_dIII(N: int = 64, rows: int | None = None) -> Bundle:
    """Sphere bundle of the time-reversal invariant superconductor.

    The equator carries the spin-doubled chain fibers
    span{c~_+(k), c~_-(k)} built from c_{+-} = (c_up +- c_down)/sqrt(2),
    together with the real generator I = gamma T (spinful time reversal)
    and the imaginary generator K.  Suspending along the polar angle
    consumes K and leaves a class-DIII bundle with the single
    pseudo-symmetry I.
    """
    sp = make_nambu(2)
    ts = true_symmetries(sp, spinful=True)
    I_mat = sp.gamma_matrix @ ts.T_minus.matrix
    K_mat = 1j * np.fliplr(np.eye(4))
    cset = CliffordSet(sp, (Generator(I_mat, "real"),
                            Generator(K_mat, "imaginary")))
    grid1 = make_sphere_grid(1, N)
    fibers = tuple(Plane(sp, _diii_equator_frame(k))
                   for k in grid1.points[:, 0])
    b1 = Bundle(sp, cset, grid1, fibers, "D")
    return suspend(SuspensionInput(b1, k_index=1, i_index=0), rows=rows)


def example_kitaev_chain(n: int, n_plus: int, N: int = 64) -> Bundle:
    """Circle bundle of the n-band chain with n_plus occupied bands.

    The k = 0 fiber is span{c_i} over the n - n_plus conduction bands
    plus span{c_j^dagger} over the n_plus valence bands; the k = pi fiber
    is the vacuum span{c_1, ..., c_n}.  Suspension consumes the second
    imaginary generator of the charge-conserving realization and leaves
    the class-BDI bundle with K_1 = -Q gamma as its pseudo-symmetry.
    """
    if not isinstance(n, int) or n < 1:
        raise InputError(f"band count must be a positive integer, got {n!r}")
    if not 0 <= n_plus <= n:
        raise InputError(
            f"occupied count {n_plus} out of range for {n} bands")
    sp = make_nambu(n)
    cset = imaginary_realization(sp, "AI")
    grid0 = make_sphere_grid(0)
    cols = list(range(n - n_plus)) + [2 * n - n_plus + j for j in range(n_plus)]
    A0 = Plane(sp, np.eye(2 * n, dtype=complex)[:, cols])
    b0 = Bundle(sp, cset, grid0, (A0, vacuum_plane(sp)), "AI")
    return suspend(SuspensionInput(b0, k_index=1), points=N)
