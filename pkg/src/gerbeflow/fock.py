"""Truncated charged fermion ladder and spinor module with exact operators.

States are occupation sets over a symmetric mode window, encoded against
the filled-sea convention: modes below 0 are occupied by default, and a
basis state records which window modes are occupied.  Everything below
the window is implicitly occupied, everything above implicitly vacant.
Operator identities are only asserted on guard-masked states that cannot
leak amplitude out of the window; masks are first-class values here.

Sign conventions (fixed):
  * ladder sign = parity of occupied window modes below the acted mode;
  * the charge raiser acts by S|O> = (-1)^{|O|} |{lo} u (O+1)>, which is
    exactly what composing a*(u_0) with the mode relabeling produces and
    satisfies S a(u_k) S^{-1} = a(u_{k+1}) wherever defined;
  * unit spinor basis: Clifford generators carry +-sqrt(2) entries and
    the zero generator is the parity grading, acting as the identity on
    the vacuum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .operators import SparseOperator, kron
from .scalars import ExactScalar

__all__ = [
    "ModeWindow",
    "FockBasisState",
    "FockSpace",
    "SpinorBasisState",
    "SpinorSpace",
    "enumerate_basis",
    "creation",
    "annihilation",
    "charge_operator",
    "shift_operator",
    "shift_inverse",
    "loop_operator",
    "clifford_operator",
    "parity_operator",
    "guard_mask",
    "tensor",
    "basis_manifest",
]


class BasisBudgetError(RuntimeError):
    """Basis enumeration would exceed the state budget."""


@dataclass(frozen=True)
class ModeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if not (self.lo < 0 < self.hi):
            raise ValueError(f"window must straddle zero, got ({self.lo}, {self.hi})")

    @property
    def span(self) -> int:
        return self.hi - self.lo

    def modes(self) -> range:
        return range(self.lo, self.hi)

    def __contains__(self, mode: int) -> bool:
        return self.lo <= mode < self.hi


@dataclass(frozen=True)
class FockBasisState:
    occupied: FrozenSet[int]
    charge: int


@dataclass(frozen=True)
class SpinorBasisState:
    excitations: FrozenSet[int]
    parity: int


class FockSpace:
    """Enumerated truncated basis with index bookkeeping.

    max_excitation caps the number of particles and the number of holes
    separately; None means unconstrained (all occupation subsets).
    """

    def __init__(
        self,
        window: ModeWindow,
        max_excitation: Optional[int] = None,
        max_states: int = 1 << 17,
    ):
        self.window = window
        span = window.span
        if max_excitation is None:
            max_excitation = span
        self.max_excitation = max_excitation
        self._sea_mask = (1 << (-window.lo)) - 1  # bits 0..(-lo-1) = modes lo..-1

        n_pos = window.hi
        n_neg = -window.lo
        cap_p = min(max_excitation, n_pos)
        cap_h = min(max_excitation, n_neg)
        est = _subset_count(n_pos, cap_p) * _subset_count(n_neg, cap_h)
        if est > max_states:
            raise BasisBudgetError(
                f"enumeration needs {est} states, budget is {max_states}; "
                f"raise max_states to at least {est}"
            )

        masks = []
        for pmask in _subsets_up_to(n_pos, cap_p):
            for hmask in _subsets_up_to(n_neg, cap_h):
                # particles sit at bit (-lo + p); holes clear bits of the sea
                occ = (self._sea_mask & ~hmask) | (pmask << n_neg)
                masks.append(occ)
        masks.sort(key=lambda m: (self._charge_of(m), m))
        self.masks: List[int] = masks
        self.index: Dict[int, int] = {m: i for i, m in enumerate(masks)}
        self.dim = len(masks)

    # -- encoding helpers ---------------------------------------------

    def _bit(self, mode: int) -> int:
        return mode - self.window.lo

    def _charge_of(self, mask: int) -> int:
        particles = (mask >> (-self.window.lo)).bit_count()
        holes = (-self.window.lo) - (mask & self._sea_mask).bit_count()
        return particles - holes

    def charge(self, i: int) -> int:
        return self._charge_of(self.masks[i])

    def occupied_modes(self, i: int) -> FrozenSet[int]:
        mask = self.masks[i]
        return frozenset(m for m in self.window.modes() if mask >> self._bit(m) & 1)

    def state(self, i: int) -> FockBasisState:
        return FockBasisState(self.occupied_modes(i), self.charge(i))

    def states(self) -> List[FockBasisState]:
        return [self.state(i) for i in range(self.dim)]

    def sea_index(self) -> int:
        return self.index[self._sea_mask]

    def index_of_occupied(self, occupied) -> int:
        mask = 0
        for m in occupied:
            mask |= 1 << self._bit(m)
        return self.index[mask]

    # -- guard masks ----------------------------------------------------

    def guard_mask(self, margin: int) -> FrozenSet[int]:
        """States with no holes in the bottom `margin` modes and no
        particles in the top `margin` modes of the window."""
        lo_bits = ((1 << margin) - 1) if margin > 0 else 0
        hi_bits = lo_bits << (self.window.span - margin) if margin > 0 else 0
        keep = []
        for i, mask in enumerate(self.masks):
            if (mask & lo_bits) == lo_bits and (mask & hi_bits) == 0:
                keep.append(i)
        return frozenset(keep)


def _subset_count(n: int, k: int) -> int:
    from math import comb

    return sum(comb(n, j) for j in range(0, min(k, n) + 1))


def _subsets_up_to(n: int, k: int):
    for mask in range(1 << n):
        if mask.bit_count() <= k:
            yield mask


# ---------------------------------------------------------------------------
# operators on the Fock space


def enumerate_basis(
    window: ModeWindow, max_excitation: Optional[int] = None, max_states: int = 1 << 17
) -> List[FockBasisState]:
    return FockSpace(window, max_excitation, max_states).states()


def _jw_sign(mask: int, bit: int) -> int:
    below = mask & ((1 << bit) - 1)
    return -1 if below.bit_count() & 1 else 1


def creation(space: FockSpace, mode: int) -> SparseOperator:
    if mode not in space.window:
        raise ValueError(f"mode {mode} outside window")
    bit = space._bit(mode)
    entries = {}
    for j, mask in enumerate(space.masks):
        if mask >> bit & 1:
            continue
        target = mask | (1 << bit)
        i = space.index.get(target)
        if i is not None:
            entries[(i, j)] = _jw_sign(mask, bit)
    return SparseOperator(space.dim, entries)


def annihilation(space: FockSpace, mode: int) -> SparseOperator:
    if mode not in space.window:
        raise ValueError(f"mode {mode} outside window")
    bit = space._bit(mode)
    entries = {}
    for j, mask in enumerate(space.masks):
        if not (mask >> bit & 1):
            continue
        target = mask & ~(1 << bit)
        i = space.index.get(target)
        if i is not None:
            entries[(i, j)] = _jw_sign(mask, bit)
    return SparseOperator(space.dim, entries)


def charge_operator(space: FockSpace) -> SparseOperator:
    return SparseOperator.diagonal([space.charge(i) for i in range(space.dim)])


def shift_operator(space: FockSpace) -> Tuple[SparseOperator, FrozenSet[int]]:
    """Charge raiser with its safe-domain mask.

    States whose top window mode is occupied would shift out of the
    window; they map to zero and are excluded from the mask.  On the
    mask the operator is a partial isometry (adjoint inverts it).
    """
    top_bit = space.window.span - 1
    entries = {}
    safe = []
    for j, mask in enumerate(space.masks):
        if mask >> top_bit & 1:
            continue
        shifted = (mask << 1) | 1  # new bottom mode arrives occupied
        i = space.index.get(shifted)
        if i is None:
            continue  # excitation cap cuts the image state
        sign = -1 if mask.bit_count() & 1 else 1
        entries[(i, j)] = sign
        safe.append(j)
    return SparseOperator(space.dim, entries), frozenset(safe)


def shift_inverse(space: FockSpace) -> Tuple[SparseOperator, FrozenSet[int]]:
    op, mask = shift_operator(space)
    inv_entries = {}
    safe = []
    for (i, j), v in op.entries.items():
        inv_entries[(j, i)] = v
        safe.append(i)
    return SparseOperator(space.dim, inv_entries), frozenset(safe)


def loop_operator(space: FockSpace, n: int) -> SparseOperator:
    """Normal-ordered hopping sum: moves one fermion up by n modes.

    n = 0 gives the charge operator (the normal ordering subtracts the
    filled-sea contribution).  adjoint(loop(n)) == loop(-n) holds as
    truncated matrices since both drop the same out-of-window terms.
    """
    if abs(n) >= space.window.span:
        raise ValueError("hop distance exceeds window span")
    if n == 0:
        return charge_operator(space)
    entries: Dict[Tuple[int, int], int] = {}
    w = space.window
    for j, mask in enumerate(space.masks):
        for i_mode in range(max(w.lo, w.lo - n), min(w.hi, w.hi - n)):
            src_bit = space._bit(i_mode)
            dst_bit = space._bit(i_mode + n)
            if not (mask >> src_bit & 1) or (mask >> dst_bit & 1):
                continue
            removed = mask & ~(1 << src_bit)
            sign = _jw_sign(mask, src_bit) * _jw_sign(removed, dst_bit)
            target = removed | (1 << dst_bit)
            i = space.index.get(target)
            if i is None:
                continue
            key = (i, j)
            entries[key] = entries.get(key, 0) + sign
    return SparseOperator(space.dim, entries)


def guard_mask(space: FockSpace, margin: int) -> FrozenSet[int]:
    return space.guard_mask(margin)


# ---------------------------------------------------------------------------
# spinor module


class SpinorSpace:
    """Vacuum module of the real Clifford generators up to a cutoff.

    Basis states are sets of distinct positive excitation indices; the
    parity grading is the excitation count mod 2.
    """

    def __init__(self, cutoff: int):
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        self.cutoff = cutoff
        self.masks = list(range(1 << cutoff))
        self.dim = len(self.masks)

    def parity(self, i: int) -> int:
        return self.masks[i].bit_count() & 1

    def state(self, i: int) -> SpinorBasisState:
        mask = self.masks[i]
        exc = frozenset(n + 1 for n in range(self.cutoff) if mask >> n & 1)
        return SpinorBasisState(exc, mask.bit_count() & 1)

    def states(self) -> List[SpinorBasisState]:
        return [self.state(i) for i in range(self.dim)]

    def vacuum_index(self) -> int:
        return 0

    def level(self, i: int) -> int:
        mask = self.masks[i]
        return sum(n + 1 for n in range(self.cutoff) if mask >> n & 1)


def clifford_operator(space: SpinorSpace, n: int) -> SparseOperator:
    """Generator psi_n: creation for n>0, annihilation for n<0, parity for n=0."""
    if abs(n) > space.cutoff:
        raise ValueError(f"index {n} beyond cutoff {space.cutoff}")
    if n == 0:
        return parity_operator(space)
    bit = abs(n) - 1
    root2 = ExactScalar.sqrt2()
    entries = {}
    for j, mask in enumerate(space.masks):
        occupied = bool(mask >> bit & 1)
        if n > 0 and not occupied:
            target = mask | (1 << bit)
        elif n < 0 and occupied:
            target = mask & ~(1 << bit)
        else:
            continue
        sign = _jw_sign(mask, bit)
        entries[(target, j)] = root2 if sign > 0 else -root2
    return SparseOperator(space.dim, entries)


def parity_operator(space: SpinorSpace) -> SparseOperator:
    return SparseOperator.diagonal([1 - 2 * space.parity(i) for i in range(space.dim)])


def tensor(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    """Kronecker product, left factor major; right factors here are even
    (charge preserving), so the ungraded product is the correct one."""
    return kron(a, b)


def basis_manifest(space: FockSpace) -> List[str]:
    """Human-readable state list matching the operator dump row order."""
    out = []
    for i in range(space.dim):
        occ = sorted(space.occupied_modes(i))
        out.append(f"{i} charge={space.charge(i)} occupied={occ}")
    return out
