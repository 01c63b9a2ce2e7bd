"""Exact checks of the A_i / A_i' partition of the 2-torus and the coordinate sets of T^p.

Points of a grid (1/Q)Z^d / Z^d are stored as integer numerators in
(-Q/2, Q/2], so every predicate below is exact integer arithmetic.
Regions are unions of convex pieces; a piece is a conjunction of
constraints cx*x + cy*y + c0 (op) 0 with op in {">", ">="}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InvalidOperationError, SizeError
from .linalg import ElemTransvection

BP_POINT_CAP = 4_000_000

Constraint = tuple[int, int, int, str]
Piece = tuple[Constraint, ...]

_SMALL_SQUARE: Piece = ((-4, 0, 1, ">"), (4, 0, 1, ">"), (0, -4, 1, ">"), (0, 4, 1, ">"))


def _antipode(piece: Piece) -> Piece:
    return tuple((-cx, -cy, c0, op) for cx, cy, c0, op in piece)


def _with_antipode(piece: Piece) -> tuple[Piece, ...]:
    return (piece, _antipode(piece))


def _sector(piece: Piece) -> tuple[Piece, ...]:
    # half-open angular sector of the open small square, plus its antipode
    return _with_antipode(piece + _SMALL_SQUARE)


# A_i: two opposite octants (lo, hi] of the small square
# A_i': a triangle in a band together with its antipode, keeping only its small-square edge
REGIONS: dict[str, tuple[Piece, ...]] = {
    "Origin": (((1, 0, 0, ">="), (-1, 0, 0, ">="), (0, 1, 0, ">="), (0, -1, 0, ">=")),),
    "A1": _sector(((1, 0, 0, ">="), (-1, 1, 0, ">"))),  # (45, 90]
    "A2": _sector(((0, 1, 0, ">"), (1, -1, 0, ">="))),  # (0, 45]
    "A3": _sector(((0, -1, 0, ">="), (1, 1, 0, ">"))),  # (315, 360]
    "A4": _sector(((1, 0, 0, ">"), (-1, -1, 0, ">="))),  # (270, 315]
    "A1'": _with_antipode(((4, 0, -1, ">="), (0, -4, 1, ">"), (-4, 4, 1, ">"))),
    "A2'": _with_antipode(((0, 4, -1, ">="), (-4, 0, 1, ">"), (4, -4, 1, ">"))),
    "A3'": _with_antipode(((0, -4, -1, ">="), (-4, 0, 1, ">"), (4, 4, 1, ">"))),
    "A4'": _with_antipode(((4, 0, -1, ">="), (0, 4, 1, ">"), (-4, -4, 1, ">"))),
    "BandX": (((4, 0, -1, ">="),), ((-4, 0, -1, ">="),)),
    "BandY": (((0, 4, -1, ">="),), ((0, -4, -1, ">="),)),
}

A_LABELS = ("A1", "A2", "A3", "A4")
APRIME_LABELS = ("A1'", "A2'", "A3'", "A4'")
# classification order; anything left over is CentralResidue
PRECEDENCE = ("Origin",) + A_LABELS + APRIME_LABELS + ("BandX", "BandY")
LABELS = PRECEDENCE + ("CentralResidue",)


# -- points


def reduce_coord(q) -> Fraction:
    """Representative of q mod 1 in (-1/2, 1/2]."""
    q = Fraction(q)
    r = q - math.floor(q)
    return r - 1 if r > Fraction(1, 2) else r


@dataclass(frozen=True)
class QPoint:
    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(reduce_coord(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def scaled(self) -> tuple[np.ndarray, int]:
        """Integer numerators over a common denominator."""
        den = math.lcm(*(c.denominator for c in self.coords)) if self.coords else 1
        return np.array([int(c * den) for c in self.coords], dtype=object), den

    def __neg__(self) -> "QPoint":
        return QPoint(-c for c in self.coords)


def reduce_numerators(a, Q: int):
    r = np.mod(a, Q)
    return np.where(2 * r > Q, r - Q, r)


def grid(Q: int, dim: int = 2) -> np.ndarray:
    """All numerator tuples of the Q-grid, shape (Q^dim, dim)."""
    if Q < 1:
        raise DimensionError("Q must be positive")
    axis = np.arange(-((Q - 1) // 2), Q // 2 + 1, dtype=np.int64)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _as_matrix(g) -> np.ndarray:
    if isinstance(g, ElemTransvection):
        return np.array(g.to_matrix().tolist(), dtype=np.int64)
    return np.asarray(g, dtype=np.int64)


def act_grid(g, points: np.ndarray, Q: int) -> np.ndarray:
    """Apply an integer matrix to grid numerators (rows of ``points``)."""
    m = _as_matrix(g)
    if m.shape != (points.shape[1], points.shape[1]):
        raise DimensionError("matrix and point dimensions differ")
    return reduce_numerators(points @ m.T, Q)


def act_sl2(g, x: QPoint) -> QPoint:
    """Linear action on the torus followed by reduction to (-1/2, 1/2]."""
    m = _as_matrix(g)
    if m.shape != (x.dim, x.dim):
        raise DimensionError("matrix and point dimensions differ")
    return QPoint(sum(int(m[i, j]) * x.coords[j] for j in range(x.dim)) for i in range(x.dim))


# -- region membership


def _piece_mask(piece: Piece, a, b, Q: int):
    mask = np.ones(np.shape(a), dtype=bool)
    for cx, cy, c0, op in piece:
        v = cx * a + cy * b + c0 * Q
        mask &= (v > 0) if op == ">" else (v >= 0)
    return mask


def region_mask(label: str, a, b, Q: int):
    if label not in REGIONS:
        raise InvalidOperationError(f"unknown region {label!r}")
    mask = np.zeros(np.shape(a), dtype=bool)
    for piece in REGIONS[label]:
        mask |= _piece_mask(piece, a, b, Q)
    return mask


def union_mask(labels: Iterable[str], a, b, Q: int):
    mask = np.zeros(np.shape(a), dtype=bool)
    for lab in labels:
        mask |= region_mask(lab, a, b, Q)
    return mask


def classify_grid(points: np.ndarray, Q: int) -> np.ndarray:
    """Label index into LABELS for every grid point."""
    a, b = points[:, 0], points[:, 1]
    out = np.full(len(points), len(PRECEDENCE), dtype=np.int64)
    for idx in reversed(range(len(PRECEDENCE))):
        out[region_mask(PRECEDENCE[idx], a, b, Q)] = idx
    return out


def classify_T2(x: QPoint) -> str:
    if x.dim != 2:
        raise DimensionError("classify_T2 needs a point of T^2")
    nums, den = x.scaled()
    pts = np.array([[int(nums[0]), int(nums[1])]], dtype=object)
    return LABELS[int(classify_grid(pts, den)[0])]


def in_region(label: str, x: QPoint) -> bool:
    nums, den = x.scaled()
    return bool(region_mask(label, int(nums[0]), int(nums[1]), den))


# -- reports


def _require_grid(Q: int) -> None:
    if Q < 4:
        raise DimensionError(f"grid denominator must be at least 4, got {Q}")


def check_partition(Q: int) -> dict:
    """Disjointness of the A and A' sets, coverage by A, bands and origin, antipodal symmetry."""
    _require_grid(Q)
    pts = grid(Q)
    a, b = pts[:, 0], pts[:, 1]
    masks = {lab: region_mask(lab, a, b, Q) for lab in REGIONS}
    named = A_LABELS + APRIME_LABELS
    overlap = sum(masks[lab].astype(np.int64) for lab in named)
    overlaps = int((overlap > 1).sum())
    cover = masks["Origin"] | masks["BandX"] | masks["BandY"]
    for lab in A_LABELS:
        cover |= masks[lab]
    uncovered = int((~cover).sum())
    origin_count = int(masks["Origin"].sum())
    # antipodal symmetry: x in A_i iff -x in A_i
    neg = reduce_numerators(-pts, Q)
    asym = 0
    for lab in named:
        asym += int((masks[lab] != region_mask(lab, neg[:, 0], neg[:, 1], Q)).sum())
    labels = classify_grid(pts, Q)
    counts = {LABELS[i]: int(c) for i, c in enumerate(np.bincount(labels, minlength=len(LABELS)))}
    violations = overlaps + uncovered + abs(origin_count - 1) + asym
    return {
        "Q": Q,
        "points": int(len(pts)),
        "overlaps": overlaps,
        "uncovered": uncovered,
        "origin_points": origin_count,
        "antipodal_asymmetries": asym,
        "label_counts": counts,
        "violations": violations,
    }


IDENTITIES = {
    "g12+(A3 u A4') = A3 u A4": (ElemTransvection(2, 0, 1, 1), ("A3", "A4'"), ("A3", "A4")),
    "g21+(A3' u A4) = A3 u A4": (ElemTransvection(2, 1, 0, 1), ("A3'", "A4"), ("A3", "A4")),
    "g12-(A1' u A2) = A1 u A2": (ElemTransvection(2, 0, 1, -1), ("A1'", "A2"), ("A1", "A2")),
    "g21-(A1 u A2') = A1 u A2": (ElemTransvection(2, 1, 0, -1), ("A1", "A2'"), ("A1", "A2")),
}


def check_identity(g: ElemTransvection, source: Sequence[str], target: Sequence[str], Q: int) -> dict:
    """Count points breaking g(X) subset Y and g^-1(Y) subset X on the Q-grid."""
    pts = grid(Q)
    a, b = pts[:, 0], pts[:, 1]
    in_x = union_mask(source, a, b, Q)
    in_y = union_mask(target, a, b, Q)
    fwd = act_grid(g, pts, Q)
    back = act_grid(g.inverse(), pts, Q)
    forward_bad = int((in_x & ~union_mask(target, fwd[:, 0], fwd[:, 1], Q)).sum())
    backward_bad = int((in_y & ~union_mask(source, back[:, 0], back[:, 1], Q)).sum())
    return {"forward": forward_bad, "backward": backward_bad, "violations": forward_bad + backward_bad}


def check_mapping_identities(Q: int) -> dict:
    _require_grid(Q)
    per = {name: check_identity(g, X, Y, Q) for name, (g, X, Y) in IDENTITIES.items()}
    return {"Q": Q, "identities": per, "violations": sum(r["violations"] for r in per.values())}


def check_grid_bijection(g, Q: int, dim: int = 2) -> bool:
    """g permutes the Q-grid."""
    pts = grid(Q, dim)
    img = act_grid(g, pts, Q)
    keys = reduce_numerators(img, Q) + Q  # shift into [0, 2Q) per coordinate
    flat = np.zeros(len(pts), dtype=np.int64)
    for col in range(dim):
        flat = flat * (2 * Q) + keys[:, col]
    return len(np.unique(flat)) == len(pts)


# -- coordinate sets in T^p (1-based indices as in the set definitions)


def in_B(y: np.ndarray, i: int) -> np.ndarray:
    """B_i: y_k = 0 for k <= i."""
    return np.all(y[:, :i] == 0, axis=1)


def in_C(y: np.ndarray, i: int) -> np.ndarray:
    """C_i: y_1 = y_i != 0 and y_k = 0 for 1 < k < i."""
    return (y[:, 0] != 0) & (y[:, 0] == y[:, i - 1]) & np.all(y[:, 1:i - 1] == 0, axis=1)


def check_Bp_Cp(p: int, Q: int) -> dict:
    """g_{1i} maps B_{i-1} minus B_i into C_i for 3 <= i <= p; the C_i are disjoint.

    C_2 is counted too: it is disjoint from the others but lies outside
    C = {y_1 != 0, y_2 = 0}, so the union claim uses i >= 3 only.
    """
    if not 3 <= p <= 5:
        raise DimensionError(f"p must be between 3 and 5, got {p}")
    if Q < 2:
        raise DimensionError("Q must be at least 2")
    if Q**p > BP_POINT_CAP:
        raise SizeError(f"grid has {Q**p} points, above the cap {BP_POINT_CAP}")
    y = grid(Q, p)
    mapping_bad = 0
    per_index = {}
    for i in range(3, p + 1):
        g = np.eye(p, dtype=np.int64)
        g[0, i - 1] = 1
        src = in_B(y, i - 1) & ~in_B(y, i)
        img = act_grid(g, y[src], Q)
        bad = int((~in_C(img, i)).sum())
        per_index[i] = {"sources": int(src.sum()), "violations": bad}
        mapping_bad += bad
    cs = {i: in_C(y, i) for i in range(2, p + 1)}
    overlap = sum(c.astype(np.int64) for c in cs.values())
    overlaps = int((overlap > 1).sum())
    big_c = (y[:, 0] != 0) & (y[:, 1] == 0)
    outside = 0
    for i in range(3, p + 1):
        outside += int((cs[i] & ~big_c).sum())
    c2_outside = int((cs[2] & ~big_c).sum())
    return {
        "p": p,
        "Q": Q,
        "mapping": per_index,
        "overlaps": overlaps,
        "outside_C": outside,
        "C2_outside_C": c2_outside,
        "violations": mapping_bad + overlaps + outside,
    }


def partition_table() -> dict:
    """Machine-readable boundary convention: each label is a union of pieces,
    each piece a conjunction of cx*x + cy*y + c0 (op) 0 over (-1/2, 1/2]^2."""
    return {
        "domain": "(-1/2, 1/2]^2",
        "constraint_form": "cx*x + cy*y + c0 op 0",
        "precedence": list(LABELS),
        "regions": {
            lab: [[{"cx": cx, "cy": cy, "c0": c0, "op": op} for cx, cy, c0, op in piece] for piece in pieces]
            for lab, pieces in REGIONS.items()
        },
        "CentralResidue": "points matching no other label (empty under this convention)",
    }


def verify_torus(Q: int, p: int | None = None, bp_grid: int = 8) -> dict:
    part = check_partition(Q)
    ident = check_mapping_identities(Q)
    out = {
        "partition_violations": part["violations"],
        "identity_violations": {k: v["violations"] for k, v in ident["identities"].items()},
        "partition": part,
    }
    if p is not None:
        out["bp_cp_violations"] = check_Bp_Cp(p, bp_grid)["violations"]
    return out
