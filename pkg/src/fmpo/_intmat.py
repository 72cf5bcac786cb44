"""Exact linear algebra over F2, Z and Z_q (q smooth and small).

Internal helpers for the group-cohomology computations.  Everything here is
exact: F2 work uses uint8 arrays, integer work uses int64 with an overflow
guard, and Z_q systems are handled per prime power and recombined by CRT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_INT_GUARD = np.int64(1) << 55


# ---------------------------------------------------------------------------
# GF(2)
# ---------------------------------------------------------------------------

def f2_rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2); returns (rref, pivot columns)."""
    m = (np.asarray(a, dtype=np.uint8) & 1).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hit = np.nonzero(m[r:, c])[0]
        if hit.size == 0:
            continue
        i = r + hit[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        other = np.nonzero(m[:, c])[0]
        other = other[other != r]
        m[other] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def f2_rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(f2_rref(a)[1])


def f2_nullspace(a: np.ndarray) -> np.ndarray:
    """Rows span the kernel of ``a`` over GF(2)."""
    a = np.asarray(a, dtype=np.uint8) & 1
    rows, cols = a.shape
    rref, pivots = f2_rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = rref[r, fc]
    return basis


def f2_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of ``a x = b`` over GF(2), or None."""
    a = np.asarray(a, dtype=np.uint8) & 1
    b = (np.asarray(b, dtype=np.uint8) & 1).reshape(-1, 1)
    aug, pivots = f2_rref(np.hstack([a, b]))
    cols = a.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for r, pc in enumerate(pivots):
        x[pc] = aug[r, cols]
    return x


def f2_in_rowspace(rows: np.ndarray, v: np.ndarray) -> bool:
    if rows.size == 0:
        return not np.any(np.asarray(v, dtype=np.uint8) & 1)
    return f2_solve(np.asarray(rows).T, v) is not None


# ---------------------------------------------------------------------------
# Smith normal form over Z with left transforms tracked mod q
# ---------------------------------------------------------------------------

@dataclass
class SnfLeft:
    """R A C = diag(pivots); R and its inverse U are stored mod q."""

    rank: int
    pivots: list[int]
    R_mod: np.ndarray       # left transform, mod q
    U_mod: np.ndarray       # inverse of the left transform, mod q
    q: int


def snf_left_transform(a: np.ndarray, q: int) -> SnfLeft:
    """Integer SNF of ``a`` tracking only the left transform (mod q).

    Row operations use unit scalings only; column operations are not
    tracked.  Suitable when only the left change of basis matters.
    """
    w = np.array(a, dtype=np.int64, copy=True)
    m, n = w.shape
    R = np.eye(m, dtype=np.int64)
    U = np.eye(m, dtype=np.int64)
    pivots: list[int] = []
    r = 0
    while r < min(m, n):
        sub = w[r:, r:]
        nz = np.nonzero(sub)
        if nz[0].size == 0:
            break
        # repeatedly reduce until the corner divides its row and column
        while True:
            sub = w[r:, r:]
            nz = np.nonzero(sub)
            vals = np.abs(sub[nz])
            k = int(np.argmin(vals))
            i, j = int(nz[0][k]) + r, int(nz[1][k]) + r
            if i != r:
                w[[r, i]] = w[[i, r]]
                R[[r, i]] = R[[i, r]]
                U[:, [r, i]] = U[:, [i, r]]
            if j != r:
                w[:, [r, j]] = w[:, [j, r]]
            p = w[r, r]
            # clear the column with integer quotients
            col = w[r + 1:, r]
            if np.any(col):
                qs = col // p
                w[r + 1:, :] -= qs[:, None] * w[r, :]
                R[r + 1:, :] -= qs[:, None] * R[r, :]
                U[:, r] += U[:, r + 1:] @ qs
                if np.any(w[r + 1:, r]):
                    continue
            row = w[r, r + 1:]
            if np.any(row):
                qs = row // p
                w[:, r + 1:] -= np.outer(w[:, r], qs)
                if np.any(w[r, r + 1:]):
                    continue
            if (np.max(np.abs(w)) > _INT_GUARD or np.max(np.abs(R)) > _INT_GUARD
                    or np.max(np.abs(U)) > _INT_GUARD):
                raise OverflowError("integer growth in SNF exceeded the guard")
            break
        if w[r, r] < 0:
            w[r, :] = -w[r, :]
            R[r, :] = -R[r, :]
            U[:, r] = -U[:, r]
        pivots.append(int(w[r, r]))
        r += 1
    return SnfLeft(rank=r, pivots=pivots, R_mod=np.mod(R, q), U_mod=np.mod(U, q), q=q)


# ---------------------------------------------------------------------------
# linear systems over Z_q via prime-power CRT
# ---------------------------------------------------------------------------

def prime_power_factors(q: int) -> list[tuple[int, int]]:
    """[(p, p^k)] with q = prod p^k."""
    out = []
    n = q
    p = 2
    while p * p <= n:
        if n % p == 0:
            pk = 1
            while n % p == 0:
                n //= p
                pk *= p
            out.append((p, pk))
        p += 1
    if n > 1:
        out.append((n, n))
    return out


class _PrimePowerSystem:
    """Diagonalized form of ``A x = b (mod p^k)`` for many right-hand sides.

    Brings A to diagonal shape diag(p^{v_1}, ..., p^{v_r}, 0, ...) by row and
    column operations with minimum-valuation pivoting; row operations are
    replayed on right-hand sides, column operations are accumulated so
    solutions and kernel vectors can be mapped back.
    """

    def __init__(self, a: np.ndarray, p: int, pk: int):
        self.p = p
        self.pk = pk
        self.k = round(np.log(pk) / np.log(p))
        w = np.mod(np.asarray(a, dtype=np.int64), pk)
        m, n = w.shape
        self.m, self.n = m, n
        self.C = np.eye(n, dtype=np.int64)
        self.row_ops: list[tuple] = []
        self.pivot_vals: list[int] = []
        r = 0
        while r < min(m, n):
            pos = self._find_pivot(w, r)
            if pos is None:
                break
            i, j, v = pos
            if i != r:
                w[[r, i]] = w[[i, r]]
                self.row_ops.append(("swap", r, i))
            if j != r:
                w[:, [r, j]] = w[:, [j, r]]
                self.C[:, [r, j]] = self.C[:, [j, r]]
            pv = p ** v
            unit = w[r, r] // pv
            inv = pow(int(unit), -1, pk)
            w[r, :] = np.mod(w[r, :] * inv, pk)
            self.row_ops.append(("scale", r, inv))
            col = w[r + 1:, r]
            if np.any(col):
                mult = col // pv
                w[r + 1:, :] = np.mod(w[r + 1:, :] - mult[:, None] * w[r, :], pk)
                self.row_ops.append(("elim", r, mult.copy()))
            row = w[r, r + 1:]
            if np.any(row):
                mult = row // pv
                self.C[:, r + 1:] = np.mod(self.C[:, r + 1:]
                                           - np.outer(self.C[:, r], mult), pk)
                w[r, r + 1:] = 0
            self.pivot_vals.append(pv)
            r += 1
        self.rank = r

    def _find_pivot(self, w, r):
        sub = w[r:, r:]
        if not np.any(sub):
            return None
        for v in range(self.k):
            pv = self.p ** v
            if v == 0:
                mask = (sub % self.p) != 0
            else:
                mask = ((sub % (pv * self.p)) != 0) & ((sub % pv) == 0)
            nz = np.nonzero(mask)
            if nz[0].size:
                return (int(nz[0][0]) + r, int(nz[1][0]) + r, v)
        return None

    def _apply_row_ops(self, b: np.ndarray) -> np.ndarray:
        y = np.mod(np.asarray(b, dtype=np.int64), self.pk).copy()
        for op in self.row_ops:
            if op[0] == "swap":
                _, r, i = op
                y[[r, i]] = y[[i, r]]
            elif op[0] == "scale":
                _, r, inv = op
                y[r] = (y[r] * inv) % self.pk
            else:
                _, r, mult = op
                y[r + 1:r + 1 + mult.size] = np.mod(
                    y[r + 1:r + 1 + mult.size] - mult * y[r], self.pk)
        return y

    def solve(self, b: np.ndarray) -> np.ndarray | None:
        y = self._apply_row_ops(b)
        x = np.zeros(self.n, dtype=np.int64)
        for r in range(self.rank):
            pv = self.pivot_vals[r]
            if y[r] % pv != 0:
                return None
            x[r] = y[r] // pv
        if np.any(y[self.rank:]):
            return None
        return np.mod(self.C @ x, self.pk)

    def kernel_basis(self) -> list[np.ndarray]:
        gens = []
        for r in range(self.rank):
            pv = self.pivot_vals[r]
            if pv > 1:
                gens.append(np.mod(self.C[:, r] * (self.pk // pv), self.pk))
        for c in range(self.rank, self.n):
            gens.append(np.mod(self.C[:, c], self.pk))
        return gens


class ZqSystem:
    """Exact solver for ``A x = b (mod q)`` with kernel generators, via CRT."""

    def __init__(self, a: np.ndarray, q: int):
        self.q = q
        self.n = a.shape[1]
        self.factors = prime_power_factors(q)
        self.systems = [_PrimePowerSystem(a, p, pk) for p, pk in self.factors]
        # CRT idempotents e_i = 1 mod pk_i, 0 mod others
        self.idem = []
        for _, pk in self.factors:
            rest = q // pk
            self.idem.append(rest * pow(rest, -1, pk) % q)

    def _combine(self, parts: list[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int64)
        for e, x in zip(self.idem, parts):
            out = (out + e * x) % self.q
        return out

    def solve(self, b: np.ndarray) -> np.ndarray | None:
        parts = []
        for sys_ in self.systems:
            x = sys_.solve(b)
            if x is None:
                return None
            parts.append(x)
        return self._combine(parts)

    def kernel_generators(self) -> list[np.ndarray]:
        gens = []
        for (_, pk), e, sys_ in zip(self.factors, self.idem, self.systems):
            for g in sys_.kernel_basis():
                gens.append((e * g) % self.q)
        return gens


def enumerate_subgroup(gens: list[np.ndarray], q: int,
                       limit: int = 100000) -> list[np.ndarray]:
    """All elements of the subgroup of Z_q^n generated by ``gens`` (BFS)."""
    n = gens[0].size if gens else 0
    zero = np.zeros(n, dtype=np.int64)
    seen = {zero.tobytes(): zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = (v + g) % q
                key = w.tobytes()
                if key not in seen:
                    if len(seen) >= limit:
                        raise RuntimeError("subgroup enumeration limit exceeded")
                    seen[key] = w
                    nxt.append(w)
        frontier = nxt
    return list(seen.values())


def abelian_invariants_from_orders(orders: list[int]) -> tuple[int, ...]:
    """Invariant factors (ascending divisibility chain) of a finite abelian
    group from the multiset of its element orders.

    For each prime p, ``c_j = log_p #{x : p^j x = 0} - log_p #{x : p^{j-1} x = 0}``
    counts the invariant factors with p-exponent at least ``j``.
    """
    total = len(orders)
    if total == 1:
        return ()
    exponent = 1
    for o in orders:
        exponent = exponent * o // int(np.gcd(exponent, o))
    slot_exp: dict[int, dict[int, int]] = {}
    for p, _ in prime_power_factors(int(exponent)):
        prev_log = 0
        j = 1
        while True:
            ann = sum(1 for o in orders if (p ** j) % o == 0)
            log = _int_log(ann, p)
            c = log - prev_log
            if c == 0:
                break
            for slot in range(c):
                slot_exp.setdefault(slot, {})[p] = j
            prev_log = log
            j += 1
    factors = []
    for slot in sorted(slot_exp):
        f = 1
        for p, e in slot_exp[slot].items():
            f *= p ** e
        factors.append(f)
    factors = sorted(factors)
    prod = 1
    for f in factors:
        prod *= f
    if prod != total:
        raise RuntimeError(f"invariant factor reconstruction failed: {factors} "
                           f"for group of order {total}")
    return tuple(factors)


def _int_log(n: int, p: int) -> int:
    log = 0
    while n % p == 0 and n > 1:
        n //= p
        log += 1
    if n != 1:
        raise RuntimeError(f"annihilator count {n * p ** log} is not a power of {p}")
    return log
