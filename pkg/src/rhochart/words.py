"""Symbolic phase/rotation words and the rewrites that relate them.

A word is an ordered sequence of atoms over dimension n.  A rotation atom
embeds the block [[cos, sin], [-sin, cos]] at a pair of indices; a phase atom
is a diagonal of unit-modulus entries.  Words evaluate to unitary matrices,
and three angular normal forms are supported:

* one phase-one rotation ("opor"): each rotation carries exactly one phase
  immediately to its left, on the pair's designated index, and a single full
  diagonal closes the word.  A full chart in this form has n^2 parameters.
* phase-adjoint: each rotation is conjugated by a single-index phase,
  followed by one full diagonal.
* km: all phases are pushed into the two outermost diagonals except for
  (n-1)(n-2)/2 single-index phases that cannot be removed by rephasing.

Rewrites never change the evaluation.  The basic moves are merging adjacent
diagonals and passing a diagonal through a rotation: on the rotation's
support, diag(a, b) R = diag(a/b, 1) R diag(b, b), so a common phase commutes
and a phase difference stays behind on one side.  Normalization composes
these moves in closed form and is exact up to floating-point phase sums.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .degeneracy import DegeneracyPattern, canonical_order, oriented_pair

TWO_PI = 2.0 * math.pi
HALF_PI = math.pi / 2


class UnreachableFormError(ValueError):
    """Raised when a word cannot be rewritten into the requested form."""


class FormError(ValueError):
    """Raised when an operation needs a recognized syntactic form."""


class WordForm(enum.Enum):
    ONE_PHASE_ONE_ROTATION = "opor"
    PHASE_ADJOINT = "phase_adjoint"
    KM = "km"
    GENERAL = "general"


@dataclass(frozen=True)
class RotationAtom:
    """Rotation by ``theta`` acting on rows/columns ``i < j``."""

    i: int
    j: int
    theta: float

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise ValueError(f"need 1 <= i < j, got ({self.i}, {self.j})")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")


@dataclass(frozen=True, eq=False)
class PhaseAtom:
    """Diagonal of exp(i * delta_k); indices absent from ``deltas`` get phase 0."""

    deltas: Mapping[int, float]

    def __post_init__(self):
        object.__setattr__(self, "deltas", dict(self.deltas))
        for idx, val in self.deltas.items():
            if idx < 1:
                raise ValueError(f"bad phase index {idx}")
            if not math.isfinite(val):
                raise ValueError("phase angles must be finite")

    def __eq__(self, other):
        # absent index means phase 0, so zero entries do not distinguish atoms
        if not isinstance(other, PhaseAtom):
            return NotImplemented
        mine = {k: v for k, v in self.deltas.items() if v != 0.0}
        theirs = {k: v for k, v in other.deltas.items() if v != 0.0}
        return mine == theirs


Atom = Union[RotationAtom, PhaseAtom]


@dataclass(frozen=True)
class Word:
    """Ordered atom sequence over dimension ``n``; evaluates left to right."""

    n: int
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for atom in self.atoms:
            if isinstance(atom, RotationAtom):
                if atom.j > self.n:
                    raise ValueError(f"rotation {atom} exceeds dimension {self.n}")
            elif isinstance(atom, PhaseAtom):
                if atom.deltas and max(atom.deltas) > self.n:
                    raise ValueError(f"phase {atom} exceeds dimension {self.n}")
            else:
                raise TypeError(f"not an atom: {atom!r}")

    def rotation_pairs(self) -> list[tuple[int, int]]:
        return [(a.i, a.j) for a in self.atoms if isinstance(a, RotationAtom)]


# ---------------------------------------------------------------------------
# evaluation


def rotation_matrix(n: int, i: int, j: int, theta: float) -> np.ndarray:
    m = np.eye(n, dtype=np.complex128)
    c, s = math.cos(theta), math.sin(theta)
    m[i - 1, i - 1] = c
    m[j - 1, j - 1] = c
    m[i - 1, j - 1] = s
    m[j - 1, i - 1] = -s
    return m


def phase_matrix(n: int, deltas: Mapping[int, float]) -> np.ndarray:
    d = np.ones(n, dtype=np.complex128)
    for idx, val in deltas.items():
        d[idx - 1] = np.exp(1j * val)
    return np.diag(d)


def atom_matrix(n: int, atom: Atom) -> np.ndarray:
    if isinstance(atom, RotationAtom):
        return rotation_matrix(n, atom.i, atom.j, atom.theta)
    return phase_matrix(n, atom.deltas)


def evaluate(w: Word) -> np.ndarray:
    """Product of the atom matrices in listed order (identity when empty)."""
    u = np.eye(w.n, dtype=np.complex128)
    for atom in w.atoms:
        u = u @ atom_matrix(w.n, atom)
    return u


# ---------------------------------------------------------------------------
# chart constructors


def _singleton_order(n: int) -> tuple[tuple[int, int], ...]:
    return canonical_order(DegeneracyPattern.singletons(n))


def chart_param_count(n: int) -> int:
    return n * n


def _split_chart_params(n: int, params) -> tuple[list[tuple[float, float]], list[float]]:
    params = [float(p) for p in params]
    m = n * (n - 1) // 2
    if len(params) != n * n:
        raise ValueError(f"expected {n * n} parameters, got {len(params)}")
    blocks = [(params[2 * k], params[2 * k + 1]) for k in range(m)]
    return blocks, params[2 * m :]


def make_opor_chart(n: int, params) -> Word:
    """Full one phase-one rotation chart word from a flat parameter vector.

    ``params`` holds one (delta, theta) pair per block, ordered like
    :func:`canonical_order` for the all-singleton pattern, followed by the n
    trailing diagonal phases.  Total length n^2.
    """
    blocks, etas = _split_chart_params(n, params)
    atoms: list[Atom] = []
    for (a, b), (delta, theta) in zip(_singleton_order(n), blocks):
        i, j = min(a, b), max(a, b)
        atoms.append(PhaseAtom({a: delta}))
        atoms.append(RotationAtom(i, j, theta))
    atoms.append(PhaseAtom({k + 1: etas[k] for k in range(n)}))
    return Word(n=n, atoms=tuple(atoms))


def make_phase_adjoint_chart(n: int, params) -> Word:
    """Chart of phase-conjugated rotations: each block's rotation is dressed
    as P R P^dagger on the pair's designated index, with a trailing diagonal.

    Same flat parameter layout as :func:`make_opor_chart` (n^2 values, of
    which n(n+1)/2 are phases).
    """
    blocks, etas = _split_chart_params(n, params)
    atoms: list[Atom] = []
    for (a, b), (psi, theta) in zip(_singleton_order(n), blocks):
        i, j = min(a, b), max(a, b)
        atoms.append(PhaseAtom({a: psi}))
        atoms.append(RotationAtom(i, j, theta))
        atoms.append(PhaseAtom({a: -psi}))
    atoms.append(PhaseAtom({k + 1: etas[k] for k in range(n)}))
    return Word(n=n, atoms=tuple(atoms))


# ---------------------------------------------------------------------------
# local rewrites


def rewrite_merge_phases(w: Word) -> Word:
    """Merge adjacent diagonals and push support-disjoint diagonals rightward
    past rotations.  Evaluation is unchanged; angles are summed mod 2*pi.
    """
    atoms = list(w.atoms)
    changed = True
    while changed:
        changed = False
        k = 0
        while k + 1 < len(atoms):
            a, b = atoms[k], atoms[k + 1]
            if isinstance(a, PhaseAtom) and isinstance(b, PhaseAtom):
                merged = dict(a.deltas)
                for idx, val in b.deltas.items():
                    merged[idx] = merged.get(idx, 0.0) + val
                merged = {idx: val % TWO_PI for idx, val in merged.items() if val % TWO_PI != 0.0}
                atoms[k : k + 2] = [PhaseAtom(merged)] if merged else []
                changed = True
                continue
            if (
                isinstance(a, PhaseAtom)
                and isinstance(b, RotationAtom)
                and not ({b.i, b.j} & set(a.deltas))
            ):
                atoms[k], atoms[k + 1] = b, a
                changed = True
                continue
            k += 1
        if atoms and isinstance(atoms[-1], PhaseAtom) and not atoms[-1].deltas:
            atoms.pop()
            changed = True
    return Word(n=w.n, atoms=tuple(atoms))


def _pass_residual(phase: PhaseAtom, rot: RotationAtom, residual_index: int):
    """Split ``phase`` against ``rot``: residual single + diagonal that passes.

    Returns (residual_delta, passed_deltas).  On the rotation's support the
    passing diagonal carries the phase of the non-residual index on both
    rows; off-support entries pass unchanged.
    """
    i, j = rot.i, rot.j
    di = phase.deltas.get(i, 0.0)
    dj = phase.deltas.get(j, 0.0)
    passed = {k: v for k, v in phase.deltas.items() if k not in (i, j)}
    if residual_index == i:
        residual = di - dj
        common = dj
    elif residual_index == j:
        residual = dj - di
        common = di
    else:
        raise ValueError("residual index must lie on the rotation's support")
    if common != 0.0:
        passed[i] = common
        passed[j] = common
    return residual, passed


def rewrite_pass_through(w: Word, at: int, direction: str = "right") -> Word:
    """Pass the phase atom at position ``at`` through the neighbouring rotation.

    ``direction="right"`` requires a rotation at ``at + 1``: the common phase
    of the rotation's two rows emerges on its right and the difference stays
    behind on the pair's smaller index.  ``direction="left"`` is the mirror
    move for a rotation at ``at - 1``.
    """
    atoms = list(w.atoms)
    if not 0 <= at < len(atoms) or not isinstance(atoms[at], PhaseAtom):
        raise ValueError(f"no phase atom at position {at}")
    phase = atoms[at]
    if direction == "right":
        if at + 1 >= len(atoms) or not isinstance(atoms[at + 1], RotationAtom):
            raise ValueError(f"no rotation to the right of position {at}")
        rot = atoms[at + 1]
        residual, passed = _pass_residual(phase, rot, rot.i)
        out = []
        if residual % TWO_PI != 0.0:
            out.append(PhaseAtom({rot.i: residual % TWO_PI}))
        out.append(rot)
        if passed:
            out.append(PhaseAtom({k: v % TWO_PI for k, v in passed.items() if v % TWO_PI != 0.0}))
        atoms[at : at + 2] = out
    elif direction == "left":
        if at - 1 < 0 or not isinstance(atoms[at - 1], RotationAtom):
            raise ValueError(f"no rotation to the left of position {at}")
        rot = atoms[at - 1]
        # mirror identity: R diag(a, b) = diag(b, b) R diag(a/b, 1)
        residual, passed = _pass_residual(phase, rot, rot.i)
        out = []
        if passed:
            out.append(PhaseAtom({k: v % TWO_PI for k, v in passed.items() if v % TWO_PI != 0.0}))
        out.append(rot)
        if residual % TWO_PI != 0.0:
            out.append(PhaseAtom({rot.i: residual % TWO_PI}))
        atoms[at - 1 : at + 1] = out
    else:
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    return Word(n=w.n, atoms=tuple(atoms))


# ---------------------------------------------------------------------------
# normal forms


def _check_unique_pairs(w: Word):
    pairs = w.rotation_pairs()
    if len(pairs) != len(set(pairs)):
        raise UnreachableFormError(
            "word repeats a rotation pair; only evaluation is supported for such words"
        )


def _wrap(angle: float) -> float:
    wrapped = angle % TWO_PI
    if abs(wrapped) < 1e-15 or abs(wrapped - TWO_PI) < 1e-15:
        return 0.0
    return wrapped


def _reduce_angle(theta: float):
    """Map theta into [0, pi/2] plus the 0/pi flip phases absorbing the signs.

    Returns (theta', left_flips, right_flips) with flips given per block row
    ("i"/"j"), such that R(theta) = F_left R(theta') F_right.
    """
    th = theta % TWO_PI
    if th <= HALF_PI:
        return th, {}, {}
    if th <= math.pi:
        return math.pi - th, {"i": math.pi}, {"j": math.pi}
    if th <= 1.5 * math.pi:
        return th - math.pi, {"i": math.pi, "j": math.pi}, {}
    return TWO_PI - th, {"j": math.pi}, {"j": math.pi}


def _opor_sweep(w: Word, reduce_ranges: bool) -> Word:
    """Push all phases rightward, leaving one phase per rotation block.

    The running diagonal accumulates every phase seen so far; at each
    rotation it splits into a single residual on the block's designated
    index plus a diagonal that keeps moving right.  With ``reduce_ranges``
    the rotation angles are folded into [0, pi/2] on the way, the sign flips
    joining the running diagonal.
    """
    phi = [0.0] * w.n
    atoms: list[Atom] = []
    for atom in w.atoms:
        if isinstance(atom, PhaseAtom):
            for idx, val in atom.deltas.items():
                phi[idx - 1] += val
            continue
        i, j, theta = atom.i, atom.j, atom.theta
        a = oriented_pair(i, j, w.n)[0]
        if reduce_ranges:
            theta, left, right = _reduce_angle(theta)
            phi[i - 1] += left.get("i", 0.0)
            phi[j - 1] += left.get("j", 0.0)
        if a == i:
            residual = phi[i - 1] - phi[j - 1]
            phi[i - 1] = phi[j - 1]
        else:
            residual = phi[j - 1] - phi[i - 1]
            phi[j - 1] = phi[i - 1]
        if reduce_ranges:
            phi[i - 1] += right.get("i", 0.0)
            phi[j - 1] += right.get("j", 0.0)
        atoms.append(PhaseAtom({a: _wrap(residual)}))
        atoms.append(RotationAtom(i, j, theta))
    atoms.append(PhaseAtom({k + 1: _wrap(phi[k]) for k in range(w.n)}))
    return Word(n=w.n, atoms=tuple(atoms))


def _dressed_rotations(w: Word):
    """Fold every phase into rotation dressings: the word equals the product
    of conjugated rotations (psi = phase difference across the pair) times
    one trailing diagonal."""
    phi = [0.0] * w.n
    dressed = []
    for atom in w.atoms:
        if isinstance(atom, PhaseAtom):
            for idx, val in atom.deltas.items():
                phi[idx - 1] += val
        else:
            dressed.append((atom.i, atom.j, atom.theta, phi[atom.i - 1] - phi[atom.j - 1]))
    return dressed, phi


def _normalize_km(w: Word) -> Word:
    """Rewrite into km form: outer diagonals plus unavoidable inner phases.

    Between consecutive rotations the running diagonal may change on a
    single index only.  A rotation whose pair links two index groups not yet
    tied together can have its dressing phase absorbed into the left outer
    diagonal (the groups' relative offset is still free); once a pair closes
    a cycle the offset is pinned and one inner phase remains.  A weighted
    union-find tracks the pinned offsets, so a full chart keeps exactly
    (n-1)(n-2)/2 inner phases.
    """
    dressed, q = _dressed_rotations(w)
    n = w.n

    parent = list(range(n))
    pot = [0.0] * n  # offset of the left outer diagonal relative to the root

    def find(x: int) -> tuple[int, float]:
        acc = 0.0
        while parent[x] != x:
            acc += pot[x]
            x = parent[x]
        return x, acc

    off = [0.0] * n  # inner-phase increments applied so far
    middles: list = [None] * len(dressed)
    for k, (i, j, _, psi) in enumerate(dressed):
        ri, pi = find(i - 1)
        rj, pj = find(j - 1)
        if ri != rj:
            diff = psi - off[i - 1] + off[j - 1]
            parent[ri] = rj
            pot[ri] = diff - pi + pj
        else:
            current = (pi + off[i - 1]) - (pj + off[j - 1])
            inc = psi - current
            middles[k] = (i, inc)
            off[i - 1] += inc

    left = [find(x)[1] for x in range(n)]
    right = [q[x] - (left[x] + off[x]) for x in range(n)]

    atoms: list[Atom] = [PhaseAtom({k + 1: _wrap(left[k]) for k in range(n)})]
    for k, (i, j, theta, _) in enumerate(dressed):
        if middles[k] is not None:
            idx, inc = middles[k]
            wrapped = _wrap(inc)
            if wrapped != 0.0:
                atoms.append(PhaseAtom({idx: wrapped}))
        atoms.append(RotationAtom(i, j, theta))
    atoms.append(PhaseAtom({k + 1: _wrap(right[k]) for k in range(n)}))
    return Word(n=w.n, atoms=tuple(atoms))


def _normalize_phase_adjoint(w: Word) -> Word:
    dressed, q = _dressed_rotations(w)
    atoms: list[Atom] = []
    for i, j, theta, psi in dressed:
        a = oriented_pair(i, j, w.n)[0]
        signed = psi if a == i else -psi
        wrapped = _wrap(signed)
        atoms.append(PhaseAtom({a: wrapped}))
        atoms.append(RotationAtom(i, j, theta))
        atoms.append(PhaseAtom({a: -wrapped}))
    atoms.append(PhaseAtom({k + 1: _wrap(q[k]) for k in range(w.n)}))
    return Word(n=w.n, atoms=tuple(atoms))


def normalize(w: Word, target: WordForm) -> Word:
    """Rewrite ``w`` into the target form with identical evaluation.

    Requires each rotation pair to occur at most once; rotation order is
    kept as given, never silently reordered.
    """
    if target is WordForm.GENERAL or not w.atoms:
        return w
    _check_unique_pairs(w)
    if target is WordForm.ONE_PHASE_ONE_ROTATION:
        return _opor_sweep(w, reduce_ranges=False)
    if target is WordForm.PHASE_ADJOINT:
        return _normalize_phase_adjoint(w)
    if target is WordForm.KM:
        return _normalize_km(w)
    raise ValueError(f"unknown target form {target!r}")


def range_reduce(w: Word) -> Word:
    """Fold a one phase-one rotation word into canonical parameter ranges.

    Angles land in [0, pi/2] and phases in [0, 2*pi); sign flips are absorbed
    by neighbouring phases, so the evaluation is unchanged.  Idempotent.
    """
    if classify_form(w) is not WordForm.ONE_PHASE_ONE_ROTATION and w.atoms:
        raise FormError("range_reduce expects a one phase-one rotation word")
    if not w.atoms:
        return w
    return _opor_sweep(w, reduce_ranges=True)


# ---------------------------------------------------------------------------
# form recognition and phase counting


def _is_single_phase_on(atom: Atom, rot: Atom) -> bool:
    return (
        isinstance(atom, PhaseAtom)
        and isinstance(rot, RotationAtom)
        and len(atom.deltas) == 1
        and next(iter(atom.deltas)) in (rot.i, rot.j)
    )


def _is_opor(w: Word) -> bool:
    atoms = w.atoms
    if len(atoms) % 2 != 1:
        return False
    if not isinstance(atoms[-1], PhaseAtom):
        return False
    for k in range(0, len(atoms) - 1, 2):
        if not _is_single_phase_on(atoms[k], atoms[k + 1]):
            return False
    return True


def _is_phase_adjoint(w: Word) -> bool:
    atoms = w.atoms
    if len(atoms) % 3 != 1 or len(atoms) < 4:
        return False
    if not isinstance(atoms[-1], PhaseAtom):
        return False
    for k in range(0, len(atoms) - 1, 3):
        left, rot, right = atoms[k], atoms[k + 1], atoms[k + 2]
        if not (_is_single_phase_on(left, rot) and _is_single_phase_on(right, rot)):
            return False
        (li, lv), (ri, rv) = next(iter(left.deltas.items())), next(iter(right.deltas.items()))
        if li != ri or _wrap(lv + rv) != 0.0:
            return False
    return True


def _is_km(w: Word) -> bool:
    atoms = list(w.atoms)
    if not atoms:
        return False
    if isinstance(atoms[0], PhaseAtom):
        atoms = atoms[1:]
    if atoms and isinstance(atoms[-1], PhaseAtom):
        atoms = atoms[:-1]
    saw_rotation = False
    previous_was_phase = False
    for atom in atoms:
        if isinstance(atom, RotationAtom):
            saw_rotation = True
            previous_was_phase = False
        else:
            if previous_was_phase or len(atom.deltas) != 1:
                return False
            previous_was_phase = True
    return saw_rotation and not previous_was_phase


def classify_form(w: Word) -> WordForm:
    if w.atoms and all(isinstance(a, RotationAtom) for a in w.atoms):
        return WordForm.KM  # bare rotations: km with empty outer diagonals
    if _is_opor(w):
        return WordForm.ONE_PHASE_ONE_ROTATION
    if _is_phase_adjoint(w):
        return WordForm.PHASE_ADJOINT
    if _is_km(w):
        return WordForm.KM
    return WordForm.GENERAL


def matches_form(w: Word, form: WordForm) -> bool:
    if form is WordForm.GENERAL:
        return True
    return classify_form(w) is form


def count_phases(w: Word) -> tuple[int, int]:
    """(internal, external) independent phase counts for a recognized form.

    Internal phases sit strictly between rotations and survive every
    supported rewrite; external ones live in the outermost diagonals.  For
    the km form the two outer diagonals share one global phase, hence
    2n - 1 external parameters.
    """
    if not any(isinstance(a, PhaseAtom) for a in w.atoms):
        if all(isinstance(a, RotationAtom) for a in w.atoms):
            return (0, 0)
    form = classify_form(w)
    rotations = len(w.rotation_pairs())
    if form is WordForm.ONE_PHASE_ONE_ROTATION:
        return (max(rotations - 1, 0), (1 if rotations else 0) + w.n)
    if form is WordForm.PHASE_ADJOINT:
        return (max(rotations - 1, 0), (1 if rotations else 0) + w.n)
    if form is WordForm.KM:
        atoms = list(w.atoms)
        if atoms and isinstance(atoms[0], PhaseAtom):
            atoms = atoms[1:]
        if atoms and isinstance(atoms[-1], PhaseAtom):
            atoms = atoms[:-1]
        internal = sum(1 for a in atoms if isinstance(a, PhaseAtom))
        return (internal, 2 * w.n - 1)
    raise FormError("word is not in a recognized form")


# ---------------------------------------------------------------------------
# JSON encoding: {"n": 3, "atoms": [{"rot": [1, 3], "theta": 0.4},
#                                   {"phase": {"3": 1.2}}, ...]}


def word_to_json(w: Word) -> dict:
    atoms = []
    for atom in w.atoms:
        if isinstance(atom, RotationAtom):
            atoms.append({"rot": [atom.i, atom.j], "theta": atom.theta})
        else:
            atoms.append({"phase": {str(k): v for k, v in sorted(atom.deltas.items())}})
    return {"n": w.n, "atoms": atoms}


def word_from_json(obj: dict) -> Word:
    n = obj["n"]
    atoms: list[Atom] = []
    for entry in obj["atoms"]:
        if "rot" in entry:
            a, b = entry["rot"]
            if a == b:
                raise ValueError(f"rotation pair must have distinct indices, got {entry['rot']}")
            atoms.append(RotationAtom(min(a, b), max(a, b), float(entry["theta"])))
        elif "phase" in entry:
            atoms.append(PhaseAtom({int(k): float(v) for k, v in entry["phase"].items()}))
        else:
            raise ValueError(f"unknown atom {entry!r}")
    return Word(n=n, atoms=tuple(atoms))
