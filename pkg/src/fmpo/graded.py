"""Z2-graded vector spaces and dense graded tensors.

Every tensor leg is a :class:`GradedSpace` whose basis is split into an even
(bosonic) sector followed by an odd (fermionic) sector.  A
:class:`GradedTensor` carries a definite total parity and is homogeneous:
coefficients whose leg parities do not sum to the tensor parity (mod 2) are
exactly zero.

Sign bookkeeping follows the Koszul rule: exchanging two odd modes flips the
sign.  All signs are produced by :func:`permute_legs`; gluing a pair of legs
that have already been brought adjacent (end of the first tensor, start of
the second) is a plain sum.  Closing a loop "around the back" is a separate
operation, :func:`supertrace`, which weights the diagonal by ``(-1)^parity``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "GradedSpace",
    "GradedTensor",
    "HomogeneityError",
    "permute_legs",
    "contract",
    "tensor_product",
    "supertrace",
    "parity_matrix",
    "identity_matrix",
    "fuse_spaces",
    "random_homogeneous",
    "tensor_to_record",
    "tensor_from_record",
    "save_tensor",
    "load_tensor",
]


class HomogeneityError(ValueError):
    """A coefficient violates the tensor's declared parity sector."""


@dataclass(frozen=True)
class GradedSpace:
    """A Z2-graded index space: ``even_dim`` even basis vectors first, then
    ``odd_dim`` odd ones."""

    even_dim: int
    odd_dim: int = 0

    def __post_init__(self):
        if self.even_dim < 0 or self.odd_dim < 0:
            raise ValueError("sector dimensions must be non-negative")
        if self.even_dim + self.odd_dim < 1:
            raise ValueError("total dimension must be at least 1")

    @property
    def dim(self) -> int:
        return self.even_dim + self.odd_dim

    def parity(self, index: int) -> int:
        if not 0 <= index < self.dim:
            raise IndexError(f"basis index {index} out of range for {self}")
        return 0 if index < self.even_dim else 1

    def parities(self) -> np.ndarray:
        """Vector of basis parities, shape ``(dim,)``."""
        p = np.zeros(self.dim, dtype=np.int8)
        p[self.even_dim:] = 1
        return p

    def __repr__(self) -> str:
        return f"GradedSpace({self.even_dim}, {self.odd_dim})"


def _parity_mask(legs: Sequence[GradedSpace], parity: int) -> np.ndarray:
    """Boolean array, True where a coefficient is allowed by homogeneity."""
    total = np.zeros((), dtype=np.int8)
    for k, leg in enumerate(legs):
        shape = [1] * len(legs)
        shape[k] = leg.dim
        total = total ^ leg.parities().reshape(shape)
    return total == (parity % 2)


class GradedTensor:
    """Dense complex tensor with graded legs and definite total parity.

    Values are immutable once constructed; all operations return new tensors.
    """

    __slots__ = ("legs", "parity", "coeffs")

    def __init__(self, legs: Sequence[GradedSpace], parity: int, coeffs: np.ndarray,
                 *, check: bool = True):
        legs = tuple(legs)
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != tuple(s.dim for s in legs):
            raise ValueError(
                f"coefficient shape {coeffs.shape} does not match leg dimensions "
                f"{tuple(s.dim for s in legs)}")
        coeffs = coeffs.copy()
        if check:
            mask = ~_parity_mask(legs, parity)
            bad = np.abs(coeffs[mask])
            if bad.size and bad.max() > 0:
                scale = max(1.0, float(np.max(np.abs(coeffs))))
                if bad.max() > 1e-10 * scale:
                    raise HomogeneityError(
                        f"nonzero coefficient of forbidden parity (max {bad.max():.3e}) "
                        f"for declared parity {parity % 2}")
                # numerical residue below tolerance: zero it
                coeffs[mask] = 0.0
        coeffs.flags.writeable = False
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "parity", parity % 2)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("GradedTensor is immutable")

    @property
    def ndim(self) -> int:
        return len(self.legs)

    @classmethod
    def project(cls, legs: Sequence[GradedSpace], parity: int,
                coeffs: np.ndarray) -> "GradedTensor":
        """Build a tensor by zeroing all forbidden-parity entries."""
        legs = tuple(legs)
        coeffs = np.asarray(coeffs, dtype=complex).copy()
        coeffs[~_parity_mask(legs, parity)] = 0.0
        return cls(legs, parity, coeffs, check=False)

    def permute(self, perm: Sequence[int]) -> "GradedTensor":
        return permute_legs(self, perm)

    def homogeneity_defect(self) -> float:
        """Largest absolute value sitting in a forbidden parity slot."""
        bad = np.abs(self.coeffs[~_parity_mask(self.legs, self.parity)])
        return float(bad.max()) if bad.size else 0.0

    def __repr__(self) -> str:
        return (f"GradedTensor(legs={list(self.legs)}, parity={self.parity}, "
                f"shape={self.coeffs.shape})")


def _koszul_sign_array(legs: Sequence[GradedSpace], perm: Sequence[int]) -> np.ndarray:
    """Sign array over the original index layout for reordering legs by ``perm``.

    ``perm[k]`` is the original position of the leg that moves to slot ``k``.
    A pair of legs contributes -1 on index pairs where both basis vectors are
    odd and the pair's order is inverted by the permutation.
    """
    n = len(legs)
    pos = [0] * n
    for new, old in enumerate(perm):
        pos[old] = new
    sign = np.ones((), dtype=np.float64)
    for a in range(n):
        for b in range(a + 1, n):
            if pos[a] > pos[b]:
                shape_a = [1] * n
                shape_a[a] = legs[a].dim
                shape_b = [1] * n
                shape_b[b] = legs[b].dim
                pa = legs[a].parities().reshape(shape_a)
                pb = legs[b].parities().reshape(shape_b)
                sign = sign * np.where((pa & pb).astype(bool), -1.0, 1.0)
    return sign


def permute_legs(t: GradedTensor, perm: Sequence[int]) -> GradedTensor:
    """Reorder legs, applying the Koszul sign for every transposed odd pair.

    ``perm`` uses the numpy ``transpose`` convention: the new axis ``k`` is
    the old axis ``perm[k]``.
    """
    perm = tuple(perm)
    if len(perm) != t.ndim or sorted(perm) != list(range(t.ndim)):
        raise ValueError(f"{perm} is not a permutation of {t.ndim} legs")
    sign = _koszul_sign_array(t.legs, perm)
    coeffs = np.transpose(t.coeffs * sign, perm)
    legs = tuple(t.legs[p] for p in perm)
    return GradedTensor(legs, t.parity, coeffs, check=False)


def contract(a: GradedTensor, b: GradedTensor,
             pairs: Sequence[tuple[int, int]]) -> GradedTensor:
    """Contract legs of ``a`` against legs of ``b``.

    Each pair ``(la, lb)`` matches leg ``la`` of ``a`` with leg ``lb`` of
    ``b``; the spaces must be equal.  Both tensors are first permuted (with
    Koszul signs) so that the paired legs are adjacent and innermost: the
    paired legs of ``a`` move to its right end in pair order, those of ``b``
    to its left start in reversed pair order, so the pairs nest and each one
    is glued by a plain sum.  All signs come from the two permutations.
    Result legs: free legs of ``a`` then free legs of ``b``, each in original
    relative order.
    """
    pairs = list(pairs)
    a_paired = [p[0] for p in pairs]
    b_paired = [p[1] for p in pairs]
    if len(set(a_paired)) != len(a_paired) or len(set(b_paired)) != len(b_paired):
        raise ValueError("duplicate leg in contraction pairs")
    for la, lb in pairs:
        if not (0 <= la < a.ndim and 0 <= lb < b.ndim):
            raise ValueError(f"pair ({la}, {lb}) out of range")
        if a.legs[la] != b.legs[lb]:
            raise ValueError(
                f"space mismatch on pair ({la}, {lb}): {a.legs[la]} vs {b.legs[lb]}")
    a_free = [k for k in range(a.ndim) if k not in a_paired]
    b_free = [k for k in range(b.ndim) if k not in b_paired]
    ap = permute_legs(a, a_free + a_paired)
    bp = permute_legs(b, b_paired[::-1] + b_free)
    k = len(pairs)
    coeffs = np.tensordot(ap.coeffs, bp.coeffs,
                          axes=(list(range(len(a_free), a.ndim)),
                                list(range(k - 1, -1, -1))))
    legs = tuple(a.legs[i] for i in a_free) + tuple(b.legs[i] for i in b_free)
    return GradedTensor(legs, (a.parity + b.parity) % 2, coeffs, check=False)


def tensor_product(a: GradedTensor, b: GradedTensor) -> GradedTensor:
    """Graded tensor product: legs of ``a`` followed by legs of ``b``.

    No reordering happens, so no signs appear; parity adds mod 2.
    """
    coeffs = np.multiply.outer(a.coeffs, b.coeffs)
    return GradedTensor(a.legs + b.legs, (a.parity + b.parity) % 2, coeffs,
                        check=False)


def supertrace(m: GradedTensor) -> complex:
    """Parity-weighted trace ``sum_i (-1)^{|i|} m[i, i]`` of a two-leg tensor."""
    if m.ndim != 2:
        raise ValueError("supertrace requires exactly two legs")
    if m.legs[0] != m.legs[1]:
        raise ValueError(f"space mismatch: {m.legs[0]} vs {m.legs[1]}")
    weights = 1.0 - 2.0 * m.legs[0].parities().astype(np.float64)
    return complex(np.sum(weights * np.diagonal(m.coeffs)))


def parity_matrix(s: GradedSpace) -> GradedTensor:
    """Diagonal matrix acting as +1 on the even sector and -1 on the odd."""
    diag = 1.0 - 2.0 * s.parities().astype(np.float64)
    return GradedTensor((s, s), 0, np.diag(diag).astype(complex), check=False)


def identity_matrix(s: GradedSpace) -> GradedTensor:
    return GradedTensor((s, s), 0, np.eye(s.dim, dtype=complex), check=False)


def fuse_spaces(u: GradedSpace, v: GradedSpace) -> tuple[GradedSpace, np.ndarray]:
    """Fuse two spaces into one, sorting the product basis even-sector-first.

    Returns ``(fused, order)`` where ``order[k]`` is the row-major product
    index ``i*v.dim + j`` that lands at position ``k`` of the fused basis.
    The sort is stable, so row-major order is kept within each sector.
    """
    pu = u.parities()
    pv = v.parities()
    pw = (pu[:, None] ^ pv[None, :]).reshape(-1)
    order = np.argsort(pw, kind="stable")
    even = int(np.sum(pw == 0))
    return GradedSpace(even, pw.size - even), order


def random_homogeneous(legs: Sequence[GradedSpace], parity: int,
                       rng: np.random.Generator) -> GradedTensor:
    """Random homogeneous tensor with standard-normal real/imaginary parts."""
    shape = tuple(s.dim for s in legs)
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return GradedTensor.project(legs, parity, coeffs)


# ---------------------------------------------------------------------------
# interchange format
# ---------------------------------------------------------------------------

def tensor_to_record(t: GradedTensor) -> dict:
    """Plain-data record: legs, parity and row-major [re, im] coefficients."""
    flat = t.coeffs.reshape(-1)
    return {
        "legs": [{"even": s.even_dim, "odd": s.odd_dim} for s in t.legs],
        "parity": t.parity,
        "coefficients": [[float(c.real), float(c.imag)] for c in flat],
    }


def tensor_from_record(record: dict) -> GradedTensor:
    legs = tuple(GradedSpace(int(s["even"]), int(s["odd"])) for s in record["legs"])
    shape = tuple(s.dim for s in legs)
    flat = np.array([complex(re, im) for re, im in record["coefficients"]])
    if flat.size != int(np.prod(shape)):
        raise ValueError("coefficient count does not match leg dimensions")
    return GradedTensor(legs, int(record["parity"]), flat.reshape(shape))


def save_tensor(t: GradedTensor, path) -> None:
    with open(path, "w") as fh:
        json.dump(tensor_to_record(t), fh)


def load_tensor(path) -> GradedTensor:
    with open(path) as fh:
        return tensor_from_record(json.load(fh))
