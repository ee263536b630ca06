"""Quantum functionals: exact catalog values with entropic fallbacks, feeding the one-sided
asymptotic obstruction test.

Logarithmic values are kept exact as LogLinear = sum_p q_p log2(p) over primes p
with rational q_p.  Logs of distinct primes are linearly independent over Q, so
equality is coefficientwise; the sign of a nonzero combination is decided with
60-digit decimal logarithms.
"""
from decimal import Decimal, getcontext
from fractions import Fraction
import math

from ..tensor_core import Tensor, reduced_entropy, to_rational
from ..structure import EntanglementStructure, ghz, epr, w_state
from ..structure.catalog import catalog_state

FLOAT_MARGIN = 1e-9


def _factor(n: int):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class LogLinear:
    """Exact sum of rational multiples of log2 of primes (log2 2 = 1 carries constants)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {int(p): Fraction(q) for p, q in (coeffs or {}).items() if q}

    @classmethod
    def log2(cls, x):
        """log2 of a positive rational."""
        x = to_rational(x)
        if x <= 0:
            raise ValueError("log of a non-positive number")
        c = {}
        for p, k in _factor(x.numerator).items():
            c[p] = c.get(p, 0) + k
        for p, k in _factor(x.denominator).items():
            c[p] = c.get(p, 0) - k
        return cls(c)

    @classmethod
    def constant(cls, q):
        return cls({2: q})

    def __add__(self, other):
        c = dict(self.coeffs)
        for p, q in other.coeffs.items():
            c[p] = c.get(p, 0) + q
        return LogLinear(c)

    def __neg__(self):
        return LogLinear({p: -q for p, q in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        q = Fraction(q)
        return LogLinear({p: q * v for p, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, LogLinear) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def decimal(self, digits=60):
        getcontext().prec = digits
        ln2 = Decimal(2).ln()
        return sum((Decimal(q.numerator) / Decimal(q.denominator) * Decimal(p).ln() / ln2
                    for p, q in self.coeffs.items()), Decimal(0))

    def sign(self):
        if not self.coeffs:
            return 0
        v = self.decimal()
        if v == 0:  # cannot happen for a nonzero combination at this precision on sane inputs
            raise ArithmeticError("could not decide the sign of a log-linear combination")
        return 1 if v > 0 else -1

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __float__(self):
        return float(self.decimal(30))

    def __repr__(self):
        return f"LogLinear({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{q}*log2({p})" if p != 2 else f"{q}" for p, q in sorted(self.coeffs.items()))

    def to_json(self):
        return {"log2": {str(p): str(q) for p, q in sorted(self.coeffs.items())}, "float": float(self),
                "F": 2 ** float(self)}


def _theta(theta, n):
    if theta is None or theta == "uniform":
        return [Fraction(1, n)] * n
    th = list(theta)
    if len(th) != n:
        raise ValueError(f"theta has {len(th)} entries for {n} parties")
    if any((float(x) if not isinstance(x, Fraction) else x) < 0 for x in th):
        raise ValueError("theta has a negative entry")
    if abs(float(sum(th)) - 1) > 1e-12:
        raise ValueError(f"theta sums to {float(sum(th))}, not 1")
    return th


def entropic_functional(t: Tensor, theta="uniform") -> float:
    """sum_i theta_i H(rho_i) in bits, at the state itself (a lower bound on E_theta)."""
    th = _theta(theta, t.party_count)
    return float(sum(float(w) * reduced_entropy(t, i) for i, w in enumerate(th) if w))


def _edge_theta(theta, e):
    tot = sum(theta[v] for v in e)
    return tot, ([w / tot for w in (theta[v] for v in e)] if tot else None)


def _is_uniform(th):
    return all(x == th[0] for x in th)


def _catalog_log(t: Tensor, th):
    """(exact log value, name) for recognised catalog tensors with this theta, else None."""
    k = t.party_count
    d = t.dims[0]
    if k >= 2 and all(x == d for x in t.dims):
        if t == ghz(d, k):
            return LogLinear.log2(d), f"GHZ_{d}({k})"
        if k == 2 and t == epr(d):
            return LogLinear.log2(d), f"EPR_{d}"
        if k == 3 and d == 2 and t == w_state(3) and all(Fraction(x) == Fraction(1, 3) for x in th):
            # H(1/3, 2/3) = log2 3 - 2/3
            return LogLinear.log2(3) - LogLinear.constant(Fraction(2, 3)), "W(3), uniform theta"
    return None


def functional_catalog_value(x, theta="uniform", **params):
    """Exact log2 F_theta for catalog items.

    x is a catalog name (with params), a Tensor equal to a catalog state, or a
    structure whose edges all are; structures use
    E(s) = sum_e Theta_e E_{theta^(e)}(phi_e), Theta_e = sum_{v in e} theta_v.
    """
    if isinstance(x, str):
        x = catalog_state(x, params or None)
    if isinstance(x, Tensor):
        th = [Fraction(v) if not isinstance(v, float) else v for v in _theta(theta, x.party_count)]
        got = _catalog_log(x, th)
        if got is None:
            raise KeyError("no closed-form functional value for this state and theta")
        return got[0]
    if isinstance(x, EntanglementStructure):
        th = _theta(theta, x.graph.vertex_count)
        total = LogLinear()
        for n, (e, t) in enumerate(zip(x.graph.edges, x.edge_states)):
            tot, sub = _edge_theta(th, e)
            if not tot:
                continue
            got = _catalog_log(t, sub)
            if got is None:
                raise KeyError(f"edge {n}: no closed-form functional value")
            total = total + got[0].scale(tot)
        return total
    raise TypeError("expected a catalog name, a Tensor or an EntanglementStructure")


def _dim_bound(t, th):
    return sum((LogLinear.log2(d).scale(w) for d, w in zip(t.dims, th) if w), LogLinear())


def _edge_upper(t, th):
    got = _catalog_log(t, th)
    if got is not None:
        return got[0], f"catalog {got[1]}"
    return _dim_bound(t, th), "dimension bound sum theta_i log2 d_i"


def _edge_lower(t, th):
    got = _catalog_log(t, th)
    if got is not None:
        return got[0], f"catalog {got[1]}"
    return entropic_functional(t, th), "entropic value at the state"


def asymptotic_obstruction_check(sA, sB, theta="uniform"):
    """'obstructed' if log F_theta(sA) < log F_theta(sB) strictly (upper bound for sA, lower for sB).

    Exact when both sides are catalog/dimension values; otherwise compared in
    floating point with a margin.  Ties and anything unresolved are 'inconclusive'.
    """
    if sA.graph.vertex_count != sB.graph.vertex_count:
        raise ValueError("structures must share the vertex set")
    th = _theta(theta, sA.graph.vertex_count)
    th = [Fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(10 ** 12) for v in th]

    def side(s, pick):
        exact, approx, notes = LogLinear(), 0.0, []
        for n, (e, t) in enumerate(zip(s.graph.edges, s.edge_states)):
            tot, sub = _edge_theta(th, e)
            if not tot:
                continue
            v, how = pick(t, sub)
            if isinstance(v, LogLinear):
                exact = exact + v.scale(tot)
            else:
                approx += float(tot) * v
            notes.append({"edge": n, "Theta": str(tot), "value": float(v) if isinstance(v, LogLinear) else v,
                          "source": how})
        return exact, approx, notes

    ua, fa, na = side(sA, _edge_upper)
    lb, fb, nb = side(sB, _edge_lower)
    exact = not fa and not fb
    if exact:
        diff = lb - ua
        obstructed = diff.sign() > 0
        gap = float(diff)
    else:
        gap = float(lb) + fb - float(ua) - fa
        obstructed = gap > FLOAT_MARGIN
    return {"verdict": "obstructed" if obstructed else "inconclusive", "exact": exact,
            "source_upper_log2": float(ua) + fa, "target_lower_log2": float(lb) + fb, "gap": gap,
            "theta": [str(x) for x in th], "source_edges": na, "target_edges": nb}
