"""Classical modular polynomials: generation, the on-disk table format, and validation.

Tables are produced from q-expansions (``python -m exceptional_pairs.modpoly --out DIR``)
and shipped under ``data/modpoly``.  Every load re-checks symmetry, bidegree and the
Kronecker congruence, so a corrupted file is rejected with a named cause.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .qseries import Laurent, j_series

SHIPPED_LEVELS = (2, 3, 5, 7, 11, 13)


class ModularPolynomialError(ValueError):
    """A table failed to parse or validate; ``cause`` names the failed check."""

    def __init__(self, cause: str, message: str):
        super().__init__(f"{cause}: {message}")
        self.cause = cause


@dataclass(frozen=True)
class ModularPolynomial:
    ell: int
    coeffs: dict[tuple[int, int], int]  # (i, j) -> coefficient of X^i Y^j, both orders stored

    def coefficient(self, i: int, j: int) -> int:
        return self.coeffs.get((i, j), 0)

    @property
    def degree(self) -> int:
        return max(i for i, _ in self.coeffs)

    def specialize(self, x):
        """Coefficients of Phi(x, Y) as a list indexed by the power of Y.

        ``x`` may be anything supporting ``+`` and ``*`` with ints (Fraction,
        QuadFieldElem, ...).
        """
        deg = self.degree
        xpow = [1]
        for _ in range(deg):
            xpow.append(xpow[-1] * x)
        out = []
        for j in range(deg + 1):
            acc = 0
            for i in range(deg + 1):
                c = self.coeffs.get((i, j))
                if c:
                    acc = acc + xpow[i] * c
            out.append(acc)
        return out


def _check_symmetry(coeffs):
    for (i, j), c in coeffs.items():
        if coeffs.get((j, i), 0) != c:
            raise ModularPolynomialError("symmetry", f"c[{i}][{j}] = {c} but c[{j}][{i}] = {coeffs.get((j, i), 0)}")


def _check_degree(ell, coeffs):
    deg = ell + 1
    for i, j in coeffs:
        if i > deg or j > deg:
            raise ModularPolynomialError("degree", f"term X^{i} Y^{j} exceeds degree {deg}")
    if coeffs.get((deg, 0)) != 1:
        raise ModularPolynomialError("degree", f"X^{deg} must have coefficient 1")
    if any(i == deg and j > 0 and c for (i, j), c in coeffs.items()):
        raise ModularPolynomialError("degree", f"X^{deg} must occur only with Y^0")


def _check_kronecker(ell, coeffs):
    # (X^ell - Y)(X - Y^ell) = X^(ell+1) - X^ell Y^ell - X Y + Y^(ell+1)
    target = {(ell + 1, 0): 1, (0, ell + 1): 1, (ell, ell): -1, (1, 1): -1}
    keys = set(coeffs) | set(target)
    for key in keys:
        if (coeffs.get(key, 0) - target.get(key, 0)) % ell:
            raise ModularPolynomialError(
                "kronecker", f"coefficient of X^{key[0]} Y^{key[1]} is not congruent mod {ell}"
            )


def validate(poly: ModularPolynomial) -> None:
    _check_symmetry(poly.coeffs)
    _check_degree(poly.ell, poly.coeffs)
    _check_kronecker(poly.ell, poly.coeffs)


def parse_table(text: str) -> ModularPolynomial:
    ell = None
    coeffs: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if ell is None:
            if len(parts) != 2 or parts[0] != "ell":
                raise ModularPolynomialError("format", f"line {lineno}: expected 'ell <p>' header")
            ell = int(parts[1])
            continue
        if len(parts) != 3:
            raise ModularPolynomialError("format", f"line {lineno}: expected '<i> <j> <coefficient>'")
        i, j, c = int(parts[0]), int(parts[1]), int(parts[2])
        if (i, j) in coeffs:
            raise ModularPolynomialError("format", f"line {lineno}: duplicate entry ({i}, {j})")
        coeffs[(i, j)] = c
    if ell is None:
        raise ModularPolynomialError("format", "empty table")
    # entries with i < j are optional; when present, the symmetry check compares them
    full = dict(coeffs)
    for (i, j), c in coeffs.items():
        full.setdefault((j, i), c)
    return ModularPolynomial(ell, full)


def format_table(poly: ModularPolynomial) -> str:
    lines = [f"ell {poly.ell}"]
    for (i, j) in sorted(poly.coeffs, reverse=True):
        if i >= j and poly.coeffs[(i, j)]:
            lines.append(f"{i} {j} {poly.coeffs[(i, j)]}")
    return "\n".join(lines) + "\n"


def load_modular_polynomial(ell: int, source: str | Path | None = None) -> ModularPolynomial:
    """Load and validate the table for ``ell``.

    ``source`` is a directory holding ``phi_<ell>.txt`` or a file path; by default
    the shipped tables are used.
    """
    if source is None:
        text = resources.files("exceptional_pairs").joinpath(f"data/modpoly/phi_{ell}.txt").read_text()
    else:
        path = Path(source)
        if path.is_dir():
            path = path / f"phi_{ell}.txt"
        if not path.exists():
            raise FileNotFoundError(f"no modular polynomial table at {path}")
        text = path.read_text()
    poly = parse_table(text)
    if poly.ell != ell:
        raise ModularPolynomialError("format", f"table is for ell={poly.ell}, requested {ell}")
    validate(poly)
    return poly


_CACHE: dict[int, ModularPolynomial] = {}


def shipped(ell: int) -> ModularPolynomial:
    if ell not in _CACHE:
        _CACHE[ell] = load_modular_polynomial(ell)
    return _CACHE[ell]


def _to_j_polynomial(series: Laurent, jpow: list[Laurent]) -> list[int]:
    """Write a weakly holomorphic level-one series as a polynomial in j."""
    rest = series
    top = -series.val
    poly = [0] * (max(top, 0) + 1)
    for n in range(top, 0, -1):
        c = rest[-n]
        if c:
            poly[n] = c
            rest = rest - jpow[n].scale(c)
    poly[0] = rest[0]
    for e in range(1, rest.prec):
        if rest[e]:
            raise ArithmeticError(f"series is not a polynomial in j (residual at q^{e})")
    return poly


def compute_modular_polynomial(ell: int) -> ModularPolynomial:
    """Phi_ell from q-expansions.

    Uses Phi_ell(X, j(q)) = (X - j(q^ell)) * prod_k (X - j(zeta^k q^(1/ell))); the
    second factor's power sums are ell * U_ell(j^m), so Newton's identities stay
    in series with a pole of order at most one.
    """
    qprec = 3 * ell + 12
    jt = j_series(ell * qprec + ell + 2)
    powers_t = [None, jt]
    for _ in range(2, ell + 1):
        powers_t.append(powers_t[-1] * jt)
    psums = [None] + [powers_t[m].u_operator(ell).scale(ell) for m in range(1, ell + 1)]

    one = Laurent(0, [1], qprec + 1)
    elem = [one]
    for k in range(1, ell + 1):
        acc = Laurent(0, [], qprec + 1)
        for i in range(1, k + 1):
            term = elem[k - i] * psums[i]
            acc = acc + term if i % 2 == 1 else acc - term
        elem.append(acc.exact_div(k))

    jq = j_series(qprec + ell + 4)
    j_ell = jq.substitute_power(ell)
    jpow = [one, jq]
    for _ in range(2, ell + 2):
        jpow.append(jpow[-1] * jq)

    coeffs: dict[tuple[int, int], int] = {}
    for k in range(ell + 2):
        big = elem[k] if k <= ell else Laurent(0, [], qprec + 1)
        if k >= 1:
            big = big + j_ell * elem[k - 1]
        sign = -1 if k % 2 else 1
        for n, c in enumerate(_to_j_polynomial(big, jpow)):
            if c:
                coeffs[(ell + 1 - k, n)] = sign * c
    poly = ModularPolynomial(ell, coeffs)
    validate(poly)
    return poly


def main(argv=None):
    parser = argparse.ArgumentParser(description="Generate modular polynomial tables")
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--ell", type=int, nargs="*", default=list(SHIPPED_LEVELS))
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    for ell in args.ell:
        poly = compute_modular_polynomial(ell)
        header = (
            f"# Classical modular polynomial Phi_{ell}(X, Y), entries i >= j, c[i][j] = c[j][i].\n"
            "# Generated from the q-expansion of j by exceptional_pairs.modpoly.\n"
        )
        (args.out / f"phi_{ell}.txt").write_text(header + format_table(poly))
        print(f"wrote phi_{ell}.txt ({len(poly.coeffs)} nonzero terms)")


if __name__ == "__main__":
    main()
