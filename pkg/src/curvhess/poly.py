"""Bivariate polynomials with analytic partials.

Small closed grammar for surface and field specifications on the
command line: sums of real-coefficient monomials in x and y up to
degree 4, e.g. "x^2", "0.5*x^2 - y", "x*y + 2".
"""

import re

import numpy as np

MAX_DEGREE = 4

_TOKEN = re.compile(r"\s*(?:(?P<num>[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)"
                    r"|(?P<var>[xy])(?:\^(?P<pow>[0-9]+))?)\s*")


class Polynomial2D:
    """Polynomial in x, y stored as {(px, py): coefficient}."""

    def __init__(self, coeffs):
        self.coeffs = {k: float(v) for k, v in coeffs.items()
                       if float(v) != 0.0}

    @classmethod
    def parse(cls, text):
        """Parse "a*x^p*y^q + ..." into a polynomial (degree <= 4)."""
        src = text.strip()
        if not src:
            raise ValueError("empty polynomial")
        coeffs = {}
        # split into signed terms ('+'/'-' inside an exponent like 1e-3
        # does not start a new term), then into '*'-separated factors
        terms = re.findall(r"[+-]?(?:[^+-]|(?<=[eE])[+-])+", src)
        for term in terms:
            term = term.strip()
            if not term:
                continue
            sign = -1.0 if term.startswith("-") else 1.0
            body = term.lstrip("+-").strip()
            coeff = sign
            px = py = 0
            for factor in body.split("*"):
                factor = factor.strip()
                if not factor:
                    raise ValueError(f"bad term {term!r} in {text!r}")
                m = _TOKEN.fullmatch(factor)
                if not m:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
                if m.group("num") is not None:
                    coeff *= float(m.group("num"))
                else:
                    p = int(m.group("pow") or 1)
                    if m.group("var") == "x":
                        px += p
                    else:
                        py += p
            if px + py > MAX_DEGREE:
                raise ValueError(
                    f"monomial degree {px + py} exceeds {MAX_DEGREE}")
            coeffs[(px, py)] = coeffs.get((px, py), 0.0) + coeff
        return cls(coeffs)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        out = np.zeros(np.broadcast(x, y).shape)
        for (px, py), c in self.coeffs.items():
            out += c * x ** px * y ** py
        return out

    def diff(self, var):
        """Partial derivative with respect to "x" or "y"."""
        out = {}
        for (px, py), c in self.coeffs.items():
            if var == "x" and px > 0:
                out[(px - 1, py)] = out.get((px - 1, py), 0.0) + c * px
            elif var == "y" and py > 0:
                out[(px, py - 1)] = out.get((px, py - 1), 0.0) + c * py
        return Polynomial2D(out)

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial2D(0)"
        parts = [f"{c:g}*x^{px}*y^{py}" for (px, py), c in
                 sorted(self.coeffs.items())]
        return "Polynomial2D(" + " + ".join(parts) + ")"
