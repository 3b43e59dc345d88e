"""Truncated Laurent series with integer coefficients, and the q-expansion of j."""

from __future__ import annotations


class Laurent:
    """Integer Laurent series ``sum c[k] q^(val + k)``, exact for exponents < ``prec``."""

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val: int, coeffs: list[int], prec: int):
        self.val = val
        self.coeffs = list(coeffs[: max(0, prec - val)])
        self.prec = prec

    @classmethod
    def monomial(cls, c: int, e: int, prec: int) -> "Laurent":
        return cls(e, [c], prec)

    def __getitem__(self, e: int) -> int:
        k = e - self.val
        if e >= self.prec:
            raise IndexError(f"exponent {e} beyond precision {self.prec}")
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __add__(self, other: "Laurent") -> "Laurent":
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        return Laurent(val, [self[e] + other[e] for e in range(val, prec)], prec)

    def __neg__(self) -> "Laurent":
        return Laurent(self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def scale(self, c: int) -> "Laurent":
        return Laurent(self.val, [c * x for x in self.coeffs], self.prec)

    def exact_div(self, c: int) -> "Laurent":
        out = []
        for x in self.coeffs:
            if x % c:
                raise ArithmeticError(f"coefficient {x} not divisible by {c}")
            out.append(x // c)
        return Laurent(self.val, out, self.prec)

    def __mul__(self, other: "Laurent") -> "Laurent":
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = max(0, prec - val)
        out = [0] * n
        a, b = self.coeffs, other.coeffs
        for i, ai in enumerate(a[:n]):
            if ai:
                for k, bk in enumerate(b[: n - i]):
                    out[i + k] += ai * bk
        return Laurent(val, out, prec)

    def substitute_power(self, m: int) -> "Laurent":
        """Return f(q^m)."""
        out = [0] * ((len(self.coeffs) - 1) * m + 1) if self.coeffs else []
        for k, c in enumerate(self.coeffs):
            out[k * m] = c
        return Laurent(self.val * m, out, self.prec * m)

    def u_operator(self, m: int) -> "Laurent":
        """Return sum of c_n q^(n/m) over exponents n divisible by m."""
        lo = -((-self.val) // m)
        hi = -((-self.prec) // m)
        return Laurent(lo, [self[e * m] for e in range(lo, hi)], hi)


def _sigma3_table(n: int) -> list[int]:
    s = [0] * n
    for d in range(1, n):
        d3 = d**3
        for k in range(d, n, d):
            s[k] += d3
    return s


def j_series(prec: int) -> Laurent:
    """q-expansion of the j-invariant, exact for exponents below ``prec``."""
    n = prec + 2
    s3 = _sigma3_table(n)
    e4 = Laurent(0, [1] + [240 * s3[k] for k in range(1, n)], n)
    e4_cubed = e4 * e4 * e4
    # prod (1 - q^k)^24 truncated
    eta24 = [0] * n
    eta24[0] = 1
    for k in range(1, n):
        for _ in range(24):
            for i in range(n - 1, k - 1, -1):
                eta24[i] -= eta24[i - k]
    # 1/prod(1-q^k)^24 by power-series inversion
    inv = [0] * n
    inv[0] = 1
    for i in range(1, n):
        inv[i] = -sum(eta24[k] * inv[i - k] for k in range(1, i + 1))
    inv_delta = Laurent(-1, inv, n - 1)
    return Laurent(-1, (e4_cubed * inv_delta).coeffs, prec)
