"""Multi-index combinatorics.

A multi-index ``alpha = (alpha_1, ..., alpha_n)`` carries ``|alpha|``,
``alpha!`` and ``alpha^alpha`` (with ``0^0 = 1``). Ratios such as
``|alpha|^|alpha| / alpha^alpha`` overflow 64-bit integers quickly, so they
are assembled in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from splab.errors import CapacityError, DomainError
from splab.numerics import log_binomial

MAX_ENUMERATION = 5_000_000


@dataclass(frozen=True, order=True)
class MultiIndex:
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if len(exps) < 1:
            raise DomainError("a multi-index needs at least one entry")
        if any(e < 0 for e in exps):
            raise DomainError(f"multi-index entries must be nonnegative, got {exps}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def of(cls, *exponents: int) -> "MultiIndex":
        return cls(tuple(exponents))

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, k: int, power: int = 1) -> "MultiIndex":
        e = [0] * n
        e[k] = power
        return cls(tuple(e))

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        """Inverse of ``str``: ``"[2,0,1]"`` -> ``MultiIndex((2, 0, 1))``."""
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise DomainError(f"multi-index must be bracketed, got {text!r}")
        body = text[1:-1].strip()
        if not body:
            raise DomainError("empty multi-index")
        try:
            return cls(tuple(int(tok) for tok in body.split(",")))
        except ValueError as exc:
            raise DomainError(f"bad multi-index {text!r}") from exc

    def __str__(self) -> str:
        return "[" + ",".join(str(e) for e in self.exponents) + "]"

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, k):
        return self.exponents[k]

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        """``|alpha|``."""
        return sum(self.exponents)

    @property
    def nonzero_count(self) -> int:
        return sum(1 for e in self.exponents if e)

    def factorial(self) -> int:
        """``alpha!``, exact."""
        return math.prod(math.factorial(e) for e in self.exponents)

    def log_factorial(self) -> float:
        return sum(math.lgamma(e + 1.0) for e in self.exponents)

    def log_self_power(self) -> float:
        """``log(alpha^alpha)`` with ``0^0 = 1``."""
        return sum(e * math.log(e) for e in self.exponents if e)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        _same_length(self, other)
        return MultiIndex(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        _same_length(self, other)
        return MultiIndex(tuple(a - b for a, b in zip(self, other)))

    def dominates(self, other: "MultiIndex") -> bool:
        """True iff ``self_k >= other_k`` for every ``k``."""
        _same_length(self, other)
        return all(a >= b for a, b in zip(self, other))


def _same_length(a: MultiIndex, b: MultiIndex) -> None:
    if len(a) != len(b):
        raise DomainError(f"multi-index lengths differ: {len(a)} vs {len(b)}")


def canonical_key(alpha: MultiIndex) -> tuple:
    """Sort key: by degree, then lexicographically with larger leading exponents first."""
    return (alpha.degree, tuple(-e for e in alpha.exponents))


def count_degree(n: int, k: int) -> int:
    """Number of multi-indices of length ``n`` and degree ``k``: C(n+k-1, n-1)."""
    return math.comb(n + k - 1, n - 1)


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(n - 1, k - first):
            yield (first, *rest)


def enumerate_degree(n: int, k: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` with ``|alpha| = k``.

    Order is lexicographic with the larger leading exponent first, e.g.
    ``(2,0), (1,1), (0,2)`` for ``n = k = 2``.
    """
    if n < 1 or k < 0:
        raise DomainError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    count = count_degree(n, k)
    if count > MAX_ENUMERATION:
        raise CapacityError(f"{count} multi-indices of length {n} and degree {k} exceed the cap")
    return [MultiIndex(c) for c in _compositions(n, k)]


def enumerate_up_to(n: int, degree_cap: int) -> list[MultiIndex]:
    """All multi-indices with ``|alpha| <= degree_cap``, in canonical order."""
    out: list[MultiIndex] = []
    for k in range(degree_cap + 1):
        out.extend(enumerate_degree(n, k))
    return out


def enumerate_dominated(m: MultiIndex) -> Iterator[MultiIndex]:
    """Every ``alpha`` with ``0 <= alpha_k <= m_k``."""
    def rec(prefix: tuple[int, ...], k: int):
        if k == len(m):
            yield MultiIndex(prefix)
            return
        for e in range(m[k] + 1):
            yield from rec(prefix + (e,), k + 1)
    yield from rec((), 0)


def log_power_ratio(alpha: MultiIndex) -> float:
    """``log(|alpha|^|alpha| / alpha^alpha)``."""
    d = alpha.degree
    if d == 0:
        raise DomainError("power ratio needs |alpha| >= 1")
    return d * math.log(d) - alpha.log_self_power()


def power_ratio(alpha: MultiIndex) -> float:
    """``|alpha|^|alpha| / alpha^alpha``; equals 1 for a pure power."""
    return math.exp(log_power_ratio(alpha))


def sup_monomial_pball(alpha: MultiIndex, p: float) -> float:
    """Supremum of ``|xi^alpha|`` over the unit ``l_p`` ball.

    Equals ``(alpha^alpha / |alpha|^|alpha|)^(1/p)``, attained at
    ``|xi_k| = (alpha_k / |alpha|)^(1/p)``; 1 on the polydisc.
    """
    if math.isinf(p):
        if alpha.degree == 0:
            raise DomainError("power ratio needs |alpha| >= 1")
        return 1.0
    _check_p(p)
    return math.exp(-log_power_ratio(alpha) / p)


def _check_p(p: float) -> None:
    if not (p >= 1):
        raise DomainError(f"norm exponent must lie in [1, inf], got {p}")


class LemmaCheck(NamedTuple):
    holds: bool
    equality: bool
    slack: float  # log(n^|m|) - log(power_ratio(alpha))


def check_lemma_42(alpha: MultiIndex, m: MultiIndex, n: int) -> LemmaCheck:
    """Check ``|alpha|^|alpha| / alpha^alpha <= n^|m|`` for ``alpha <= m``.

    Equality is reported when the two sides agree to 1e-12 in log space;
    it should occur exactly when ``alpha == m`` with all ``m_k`` equal.
    """
    if len(alpha) != n or len(m) != n:
        raise DomainError(f"alpha and m must both have length n={n}")
    if alpha.degree < 1:
        raise DomainError("lemma requires |alpha| >= 1")
    if not m.dominates(alpha):
        raise DomainError(f"need m_k >= alpha_k componentwise, got alpha={alpha}, m={m}")
    slack = m.degree * math.log(n) - log_power_ratio(alpha)
    return LemmaCheck(holds=slack >= -1e-12, equality=abs(slack) <= 1e-12, slack=slack)


def stirling_bound_check(n: int, m: MultiIndex) -> bool:
    """``C(n+|m|-1, n-1) <= e^|m| (1 + n/|m|)^|m|``, compared in log space."""
    d = m.degree
    if d < 1:
        raise DomainError("need |m| >= 1")
    lhs = log_binomial(n + d - 1, n - 1)
    rhs = d + d * math.log1p(n / d)
    return lhs <= rhs


def multinomial(alpha: MultiIndex) -> int:
    """``|alpha|! / alpha!``."""
    return math.factorial(alpha.degree) // alpha.factorial()


def as_multiindex(value: MultiIndex | Sequence[int] | int, n: int | None = None) -> MultiIndex:
    if isinstance(value, MultiIndex):
        return value
    if isinstance(value, int):
        if n not in (None, 1):
            raise DomainError(f"a bare integer order only makes sense for n = 1, got n={n}")
        return MultiIndex((value,))
    return MultiIndex(tuple(value))
