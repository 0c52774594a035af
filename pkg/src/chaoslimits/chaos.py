"""Finite-dimensional Wiener chaos: sparse symmetric kernels and their calculus.

The underlying Hilbert space is H = R^d with the standard basis e_0..e_{d-1},
carried by a Gaussian vector X = (X_0, ..., X_{d-1}) of i.i.d. standard normals
(the isonormal process restricted to d coordinates).  A symmetric kernel of
order n is an element of the symmetric tensor power H^{sym n}; we store it
sparsely as a map from the *sorted* multi-index (i_1 <= ... <= i_n) to the
common value on that orbit.  The squared norm in H^{tensor n} is then

    ||f||^2 = sum_idx  mult(idx) * f[idx]^2,

where mult(idx) = n! / prod_i (count of i in idx)! is the orbit size.

Hermite polynomials here carry the 1/n! normalization

    H_n(x) = ((-1)^n / n!) e^{x^2/2} (d/dx)^n e^{-x^2/2},

so that n! * H_n is the monic (probabilists') polynomial He_n and the multiple
integral of a basis product evaluates pathwise as

    I_n(sym(e_{j_1} x ... x e_{j_n}))(X) = prod_i He_{k_i}(X_i),

k_i being the number of times coordinate i appears among j_1..j_n.  Everything
else in the module (contractions, the product formula, Malliavin inner
products, the Wick moment oracle) is exact rational-coefficient arithmetic on
these sparse maps, done in floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "hermite",
    "multiplicity",
    "SymmetricKernel",
    "BlockKernel",
    "ChaosVector",
    "symmetrize",
    "contract",
    "chaos_product",
    "eval_multiple_integral",
    "malliavin_inner",
    "derivative_slices",
    "ou_inverse",
    "wick_moment",
    "expect_product",
    "sample_gaussian",
    "iter_gaussian_chunks",
    "random_kernel",
]


def hermite(n, x):
    """Hermite polynomial H_n(x) with leading coefficient 1/n!.

    Satisfies H_0 = 1, H_1 = x and (n+1) H_{n+1}(x) = x H_n(x) - H_{n-1}(x).
    Accepts scalars or arrays.
    """
    if n < 0:
        raise ValueError("hermite order must be >= 0")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = x.copy()
    for k in range(1, n):
        h, h_prev = (x * h - h_prev) / (k + 1), h
    return h if h.ndim else float(h)


def _hermite_monic_table(max_order, x):
    """He_k(x) = k! H_k(x) for k = 0..max_order, stacked along axis 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty((max_order + 1,) + x.shape)
    out[0] = 1.0
    if max_order >= 1:
        out[1] = x
    for k in range(1, max_order):
        out[k + 1] = x * out[k] - k * out[k - 1]
    return out


def multiplicity(idx):
    """Orbit size of a multi-index: n! / prod(count of each value)!."""
    m = math.factorial(len(idx))
    for _, grp in itertools.groupby(idx):
        m //= math.factorial(sum(1 for _ in grp))
    return m


def _counts(idx):
    out = {}
    for i in idx:
        out[i] = out.get(i, 0) + 1
    return out


def _check_index(idx, order, dim):
    if len(idx) != order:
        raise ValueError(f"index {idx!r} has length {len(idx)}, expected {order}")
    if any(idx[i] > idx[i + 1] for i in range(len(idx) - 1)):
        raise ValueError(f"index {idx!r} is not sorted")
    if idx and (idx[0] < 0 or idx[-1] >= dim):
        raise ValueError(f"index {idx!r} out of range for dim {dim}")


@dataclass(frozen=True)
class SymmetricKernel:
    """Sparse symmetric tensor of given order over R^dim.

    ``entries`` maps each canonical (sorted) multi-index to the common value
    of the tensor on that orbit; indices missing from the map are zero.
    Treat instances as immutable: all operations return new kernels.
    """

    dim: int
    order: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 0 or self.order < 0:
            raise ValueError("dim and order must be nonnegative")
        clean = {}
        for idx, val in self.entries.items():
            idx = tuple(int(i) for i in idx)
            _check_index(idx, self.order, self.dim)
            val = float(val)
            if val != 0.0:
                clean[idx] = val
        object.__setattr__(self, "entries", clean)

    # --- constructors -------------------------------------------------
    @staticmethod
    def zero(dim, order):
        return SymmetricKernel(dim, order, {})

    @staticmethod
    def basis(dim, idx):
        """The symmetric tensor equal to 1 at every rearrangement of idx.

        Equals mult(idx) * sym(e_{i_1} x ... x e_{i_n}); for the orbit-averaged
        tensor sym(...) itself use ``symmetrize({tuple(idx): 1.0}, dim, n)``.
        The two coincide exactly when all letters of idx are equal (orbit
        size 1), e.g. e_i^{tensor n}.
        """
        return SymmetricKernel(dim, len(idx), {tuple(sorted(idx)): 1.0})

    @staticmethod
    def constant(dim, value):
        """Order-0 kernel holding a scalar."""
        return SymmetricKernel(dim, 0, {(): float(value)})

    # --- linear structure ----------------------------------------------
    def _like(self, entries):
        return SymmetricKernel(self.dim, self.order, entries)

    def __add__(self, other):
        if (other.dim, other.order) != (self.dim, self.order):
            raise ValueError("kernel shapes differ")
        out = dict(self.entries)
        for idx, v in other.entries.items():
            out[idx] = out.get(idx, 0.0) + v
        return self._like(out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, c):
        c = float(c)
        return self._like({idx: c * v for idx, v in self.entries.items()})

    def __mul__(self, c):
        return self.__rmul__(c)

    # --- metric ----------------------------------------------------------
    def norm_sq(self):
        return sum(multiplicity(idx) * v * v for idx, v in self.entries.items())

    def norm(self):
        return math.sqrt(self.norm_sq())

    def inner(self, other):
        """<f, g> in H^{tensor n} (both kernels symmetric)."""
        if (other.dim, other.order) != (self.dim, self.order):
            raise ValueError("kernel shapes differ")
        a, b = self.entries, other.entries
        if len(b) < len(a):
            a, b = b, a
        return sum(multiplicity(idx) * v * b[idx] for idx, v in a.items() if idx in b)

    # --- structural helpers ----------------------------------------------
    def slice_kernel(self, i):
        """f(., i): fix one argument to basis coordinate i; order drops by 1."""
        if self.order == 0:
            raise ValueError("cannot slice an order-0 kernel")
        out = {}
        for idx, v in self.entries.items():
            if i in idx:
                pos = idx.index(i)
                out[idx[:pos] + idx[pos + 1:]] = v
        return SymmetricKernel(self.dim, self.order - 1, out)

    def to_raw(self):
        """Expand to the dense-orbit raw map {every rearrangement: value}."""
        out = {}
        for idx, v in self.entries.items():
            for perm in set(itertools.permutations(idx)):
                out[perm] = v
        return out

    def scaled_norm_sq(self):
        """n! ||f||^2 = E[I_n(f)^2], the chaos-isometric squared norm."""
        return math.factorial(self.order) * self.norm_sq()


def symmetrize(raw, dim=None, order=None):
    """Symmetrize a raw tensor given as {multi-index tuple: value}.

    The raw map is read literally: index tuples not present are zero (the
    orbit of a listed tuple is *not* implied).  Also accepts a
    ``SymmetricKernel`` (returned as-is; symmetrization is idempotent) or a
    ``BlockKernel`` (the unsymmetrized contraction result).
    """
    if isinstance(raw, SymmetricKernel):
        return raw
    if isinstance(raw, BlockKernel):
        return raw.symmetrized()
    if dim is None or order is None:
        raise ValueError("dim and order are required for raw dict input")
    out = {}
    for idx, v in raw.items():
        idx = tuple(int(i) for i in idx)
        if len(idx) != order:
            raise ValueError(f"raw index {idx!r} has wrong length")
        key = tuple(sorted(idx))
        out[key] = out.get(key, 0.0) + float(v) / multiplicity(key)
    return SymmetricKernel(dim, order, out)


@dataclass(frozen=True)
class BlockKernel:
    """Contraction result f (x)_r g: symmetric in its first n-r and last m-r
    arguments separately, but not across the two blocks.  ``blocks`` maps a
    pair (sorted left index, sorted right index) to the value there."""

    dim: int
    left_order: int
    right_order: int
    blocks: dict = field(default_factory=dict)

    @property
    def order(self):
        return self.left_order + self.right_order

    def norm_sq(self):
        """Unsymmetrized squared norm in H^{tensor (n+m-2r)}."""
        return sum(
            multiplicity(a) * multiplicity(b) * v * v
            for (a, b), v in self.blocks.items()
        )

    def norm(self):
        return math.sqrt(self.norm_sq())

    def symmetrized(self):
        out = {}
        for (a, b), v in self.blocks.items():
            u = tuple(sorted(a + b))
            w = v * multiplicity(a) * multiplicity(b) / multiplicity(u)
            out[u] = out.get(u, 0.0) + w
        return SymmetricKernel(self.dim, self.order, out)


def _sub_multisets(counts_a, counts_b, r):
    """All multisets of size r contained in both counts maps, as count dicts."""
    common = sorted(set(counts_a) & set(counts_b))
    caps = [min(counts_a[i], counts_b[i]) for i in common]

    def rec(pos, remaining, picked):
        if remaining == 0:
            yield dict(picked)
            return
        if pos == len(common):
            return
        if sum(caps[pos:]) < remaining:
            return
        for take in range(min(caps[pos], remaining) + 1):
            if take:
                picked.append((common[pos], take))
            yield from rec(pos + 1, remaining - take, picked)
            if take:
                picked.pop()

    yield from rec(0, r, [])


def _remove_counts(idx, sub):
    taken = dict(sub)
    out = []
    for i in reversed(idx):
        if taken.get(i, 0):
            taken[i] -= 1
        else:
            out.append(i)
    out.reverse()
    return tuple(out)


def contract(f, g, r):
    """r-fold contraction f (x)_r g, *not* symmetrized across blocks.

    (f (x)_r g)(x, y) = sum over s in [d]^r of f(x, s) g(y, s); returns a
    ``BlockKernel`` of order n + m - 2r.  Use ``.symmetrized()`` for the
    symmetric version f (x~)_r g.
    """
    if f.dim != g.dim:
        raise ValueError("kernel dims differ")
    if r < 0 or r > min(f.order, g.order):
        raise ValueError(f"contraction order r={r} out of range")
    blocks = {}
    for a, va in f.entries.items():
        ca = _counts(a)
        for b, vb in g.entries.items():
            cb = _counts(b)
            for sub in _sub_multisets(ca, cb, r):
                arrangements = math.factorial(r)
                for t in sub.values():
                    arrangements //= math.factorial(t)
                key = (_remove_counts(a, sub), _remove_counts(b, sub))
                blocks[key] = blocks.get(key, 0.0) + va * vb * arrangements
    return BlockKernel(f.dim, f.order - r, g.order - r, blocks)


@dataclass(frozen=True)
class ChaosVector:
    """Finite sum F = sum_n I_n(f_n); ``components`` maps level n to kernel."""

    dim: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, k in self.components.items():
            n = int(n)
            if k.dim != self.dim:
                raise ValueError("component dim mismatch")
            if k.order != n:
                raise ValueError(f"level {n} holds an order-{k.order} kernel")
            if k.entries:
                clean[n] = k
        object.__setattr__(self, "components", clean)

    @staticmethod
    def from_kernel(f):
        return ChaosVector(f.dim, {f.order: f})

    @staticmethod
    def constant(dim, c):
        return ChaosVector(dim, {0: SymmetricKernel.constant(dim, c)})

    def level(self, n):
        zero = SymmetricKernel.zero(self.dim, n)
        return self.components.get(n, zero)

    def expectation(self):
        return self.level(0).entries.get((), 0.0)

    def max_level(self):
        return max(self.components, default=0)

    def __add__(self, other):
        if other.dim != self.dim:
            raise ValueError("dims differ")
        out = dict(self.components)
        for n, k in other.components.items():
            out[n] = out[n] + k if n in out else k
        return ChaosVector(self.dim, out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, c):
        return ChaosVector(self.dim, {n: c * k for n, k in self.components.items()})

    def __mul__(self, c):
        return self.__rmul__(c)

    def second_moment(self):
        """E[F^2] by the isometry."""
        return expect_product(self, self)

    def variance(self):
        return sum(
            k.scaled_norm_sq() for n, k in self.components.items() if n >= 1
        )


def eval_multiple_integral(f, x):
    """Evaluate I_n(f) (or a ChaosVector) pathwise at points x.

    x has shape (dim,) for one point or (N, dim) for a batch; returns a float
    or an (N,) array accordingly.
    """
    if isinstance(f, ChaosVector):
        comps = sorted(f.components.items())
        dim = f.dim
        max_order = max((n for n, _ in comps), default=0)
    else:
        comps = [(f.order, f)]
        dim = f.dim
        max_order = f.order
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    if pts.shape[1] != dim:
        raise ValueError(f"points have dim {pts.shape[1]}, kernel has dim {dim}")
    he = _hermite_monic_table(max_order, pts)  # (order+1, N, dim)
    total = np.zeros(pts.shape[0])
    for _, kern in comps:
        for idx, v in kern.entries.items():
            term = np.full(pts.shape[0], v * multiplicity(idx))
            for i, k in _counts(idx).items():
                term = term * he[k][:, i]
            total += term
    return float(total[0]) if single else total


def chaos_product(F, G):
    """Product of two chaos vectors via the multiplication formula

    I_n(f) I_m(g) = sum_{r=0}^{n^m} r! C(n,r) C(m,r) I_{n+m-2r}(f (x)_r g).
    """
    if isinstance(F, SymmetricKernel):
        F = ChaosVector.from_kernel(F)
    if isinstance(G, SymmetricKernel):
        G = ChaosVector.from_kernel(G)
    if F.dim != G.dim:
        raise ValueError("dims differ")
    out = {}
    for n, fn in F.components.items():
        for m, gm in G.components.items():
            for r in range(min(n, m) + 1):
                coef = math.factorial(r) * math.comb(n, r) * math.comb(m, r)
                h = coef * contract(fn, gm, r).symmetrized()
                lvl = n + m - 2 * r
                out[lvl] = out[lvl] + h if lvl in out else h
    return ChaosVector(F.dim, out)


def expect_product(F, G):
    """E[F G] = sum_k k! <f_k, g_k> (orthogonality of the chaoses)."""
    total = 0.0
    for n, fn in F.components.items():
        gn = G.components.get(n)
        if gn is not None:
            total += math.factorial(n) * fn.inner(gn)
    return total


def derivative_slices(f):
    """Kernels of the Malliavin derivative: DF = n sum_i I_{n-1}(f(., i)) e_i."""
    return [f.slice_kernel(i) for i in range(f.dim)]


def malliavin_inner(F, G):
    """<DF, DG>_H as a ChaosVector.

    For pure levels, <D I_n(f), D I_m(g)> = n m sum_i I_{n-1}(f(.,i)) I_{m-1}(g(.,i));
    expanding each product with the multiplication formula and summing over i
    collapses the coordinate sum into contractions of the full kernels:

        n m sum_{r=0}^{min(n,m)-1} r! C(n-1,r) C(m-1,r) I_{n+m-2-2r}(f (x)_{r+1} g).
    """
    if isinstance(F, SymmetricKernel):
        F = ChaosVector.from_kernel(F)
    if isinstance(G, SymmetricKernel):
        G = ChaosVector.from_kernel(G)
    if F.dim != G.dim:
        raise ValueError("dims differ")
    out = {}
    for n, fn in F.components.items():
        if n == 0:
            continue
        for m, gm in G.components.items():
            if m == 0:
                continue
            for r in range(min(n, m)):
                coef = (
                    n * m * math.factorial(r)
                    * math.comb(n - 1, r) * math.comb(m - 1, r)
                )
                h = coef * contract(fn, gm, r + 1).symmetrized()
                lvl = n + m - 2 - 2 * r
                out[lvl] = out[lvl] + h if lvl in out else h
    return ChaosVector(F.dim, out)


def ou_inverse(F):
    """(-L)^{-1} F for centered F: divide level k by k.  Errors on level 0."""
    if isinstance(F, SymmetricKernel):
        F = ChaosVector.from_kernel(F)
    if F.expectation() != 0.0:
        raise ValueError("ou_inverse requires a centered input (level 0 must vanish)")
    return ChaosVector(F.dim, {n: (1.0 / n) * k for n, k in F.components.items()})


def wick_moment(factors, powers=None):
    """E[prod_i F_i^{p_i}], exactly, via repeated chaos products.

    Splits the expanded factor list in half, multiplies each half with the
    product formula, and pairs the halves with the isometry (the level-0
    read-off of the full product, done one multiplication earlier).  Guarded
    to at most 12 chaos factors.
    """
    if powers is None:
        powers = [1] * len(factors)
    if len(powers) != len(factors):
        raise ValueError("factors and powers length mismatch")
    flat = []
    for f, p in zip(factors, powers):
        if p < 0:
            raise ValueError("powers must be nonnegative")
        if isinstance(f, SymmetricKernel):
            f = ChaosVector.from_kernel(f)
        flat.extend([f] * p)
    if not flat:
        return 1.0
    if len(flat) > 12:
        raise ValueError("wick_moment limited to 12 chaos factors")

    def fold(vecs):
        acc = vecs[0]
        for v in vecs[1:]:
            acc = chaos_product(acc, v)
        return acc

    half = (len(flat) + 1) // 2
    left, right = flat[:half], flat[half:]
    if not right:
        return fold(left).expectation()
    return expect_product(fold(left), fold(right))


def iter_gaussian_chunks(dim, count, seed, chunk_size=65536):
    """Yield (k, dim) blocks of i.i.d. standard normals, k <= chunk_size.

    Chunk c is drawn from ``default_rng([seed, c])``, so the stream is
    reproducible and chunk-parallel: the first N points never depend on how
    many more are requested.
    """
    produced = 0
    c = 0
    while produced < count:
        k = min(chunk_size, count - produced)
        rng = np.random.default_rng([int(seed), c])
        yield rng.standard_normal((k, dim))
        produced += k
        c += 1


def sample_gaussian(dim, count, seed, chunk_size=65536):
    """(count, dim) array of i.i.d. standard normals; see iter_gaussian_chunks."""
    if count == 0:
        return np.empty((0, dim))
    return np.concatenate(
        list(iter_gaussian_chunks(dim, count, seed, chunk_size)), axis=0
    )


def random_kernel(rng, dim, order, nnz):
    """Random sparse symmetric kernel: nnz distinct orbits, values U(-1, 1)."""
    keys = set()
    limit = math.comb(dim + order - 1, order)
    nnz = min(nnz, limit)
    while len(keys) < nnz:
        keys.add(tuple(sorted(int(i) for i in rng.integers(0, dim, size=order))))
    return SymmetricKernel(
        dim, order, {k: float(rng.uniform(-1.0, 1.0)) for k in sorted(keys)}
    )
