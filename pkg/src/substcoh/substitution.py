"""Symbolic substitutions: parsing, incidence data, language, collaring, PF data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .exactlin import Mat
from .numberfield import NFElem, nf_kernel_basis

PISOT_TOLERANCE = Fraction(1, 10 ** 12)


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class CollarUndefined(RuntimeError):
    pass


@dataclass(frozen=True)
class Substitution:
    alphabet: tuple            # ordered symbols
    rules: dict                # symbol -> tuple of symbols
    lengths: dict | None = None  # symbol -> Fraction, or None meaning PF lengths

    def __post_init__(self):
        if not self.alphabet:
            raise ValueError("empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate symbols in alphabet")
        for a in self.alphabet:
            w = self.rules.get(a)
            if not w:
                raise ValueError("empty or missing rule for %r" % (a,))
            for x in w:
                if x not in self.alphabet:
                    raise ValueError("unknown symbol %r in rule for %r" % (x, a))

    def apply(self, word):
        out = []
        for a in word:
            out.extend(self.rules[a])
        return tuple(out)

    def is_constant_length(self):
        ls = {len(self.rules[a]) for a in self.alphabet}
        return len(ls) == 1

    def rule_length(self):
        return len(self.rules[self.alphabet[0]])


def parse_substitution(text: str) -> Substitution:
    """Parse the `symbol -> word` line format.

    Symbols are single characters unless words contain spaces, in which case
    each whitespace-separated token is a symbol.  `#` starts a comment; an
    optional `lengths: a=1 b=2` line fixes tile lengths.
    """
    rules = {}
    order = []
    lengths_spec = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("lengths:"):
            lengths_spec = (lineno, line[len("lengths:"):].strip())
            continue
        if "->" not in line:
            raise ParseError("expected 'symbol -> word'", lineno)
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        rhs = rhs.strip()
        if not lhs or len(lhs.split()) != 1:
            raise ParseError("left side must be a single symbol", lineno)
        if not rhs:
            raise ParseError("empty rule word for %r" % lhs, lineno)
        if lhs in rules:
            raise ParseError("duplicate rule for %r" % lhs, lineno)
        word = tuple(rhs.split()) if " " in rhs else tuple(rhs)
        rules[lhs] = word
        order.append(lhs)
    if not rules:
        raise ParseError("no rules found")
    alphabet = tuple(order)
    for lhs, word in rules.items():
        for x in word:
            if x not in rules:
                raise ParseError("symbol %r (in rule for %r) has no rule" % (x, lhs))
    lengths = None
    if lengths_spec is not None:
        lineno, body = lengths_spec
        lengths = {}
        for item in body.split():
            if "=" not in item:
                raise ParseError("bad lengths entry %r" % item, lineno)
            sym, val = item.split("=", 1)
            if sym not in rules:
                raise ParseError("lengths given for unknown symbol %r" % sym, lineno)
            lengths[sym] = Fraction(val)
        missing = [a for a in alphabet if a not in lengths]
        if missing:
            raise ParseError("lengths missing for %s" % ", ".join(map(repr, missing)), lineno)
    return Substitution(alphabet=alphabet, rules=rules, lengths=lengths)


def incidence_matrix(s: Substitution) -> Mat:
    """M[i][j] = number of occurrences of symbol i in the rule word of symbol j."""
    idx = {a: i for i, a in enumerate(s.alphabet)}
    n = len(s.alphabet)
    m = [[0] * n for _ in range(n)]
    for j, a in enumerate(s.alphabet):
        for x in s.rules[a]:
            m[idx[x]][j] += 1
    return Mat(m)


def is_primitive(M: Mat) -> bool:
    if not M.is_square():
        raise ValueError("incidence matrix must be square")
    if any(x < 0 or x.denominator != 1 for row in M.data for x in row):
        raise ValueError("incidence matrix must be nonnegative integer")
    n = M.rows
    k = n * n - 2 * n + 2 if n > 1 else 1
    P = M.power(max(k, 1))
    return all(x > 0 for row in P.data for x in row)


def factor_language(s: Substitution, L: int) -> frozenset:
    """All allowed factors of length <= L, as tuples of symbols."""
    if L < 1:
        return frozenset()

    def factors(word, cap):
        out = set()
        for i in range(len(word)):
            for j in range(i + 1, min(i + cap, len(word)) + 1):
                out.add(word[i:j])
        return out

    # F_m = factors of length <= L of the m-th images of all letters; this is
    # monotone increasing (every letter occurs in some rule word) and its
    # union over m is the factor set of the language.  Stop once stable for
    # three rounds with image words comfortably longer than L.
    words = {a: (a,) for a in s.alphabet}
    current = set()
    for w in words.values():
        current |= factors(w, L)
    stable = 0
    for _ in range(64):
        words = {a: s.apply(w) for a, w in words.items()}
        nxt = set(current)
        for w in words.values():
            nxt |= factors(w, L)
        long_enough = max(len(w) for w in words.values()) >= 2 * L
        stable = stable + 1 if (nxt == current and long_enough) else 0
        current = nxt
        if stable >= 3:
            return frozenset(current)
    raise RuntimeError("factor language failed to stabilize")


def periodicity_scan(s: Substitution, bound: int = 32) -> str:
    """Audit (non-)periodicity via factor counts p(n), Morse-Hedlund style.

    Returns 'Periodic' if p(n+1) = p(n) for some n <= bound, 'Aperiodic' if
    p is strictly increasing over a long enough scan, else 'Inconclusive'.
    """
    lang = factor_language(s, bound + 1)
    counts = [0] * (bound + 2)
    for w in lang:
        counts[len(w)] += 1
    p = counts[1:bound + 2]
    for n in range(1, bound + 1):
        if p[n] == p[n - 1]:
            return "Periodic"
    if bound >= 4 and all(p[n] > p[n - 1] for n in range(1, bound + 1)):
        return "Aperiodic"
    return "Inconclusive"


def border_forcing(s: Substitution):
    """Classify by shared first/last letters of all rule words."""
    firsts = {s.rules[a][0] for a in s.alphabet}
    lasts = {s.rules[a][-1] for a in s.alphabet}
    prefix = len(firsts) == 1
    suffix = len(lasts) == 1
    if prefix and suffix:
        return "Both"
    if prefix:
        return "CommonPrefix"
    if suffix:
        return "CommonSuffix"
    return None


@dataclass(frozen=True)
class CollaredSystem:
    alphabet: tuple   # triples (left, core, right)
    rules: dict       # triple -> tuple of triples
    base: Substitution

    def projection(self, t):
        return t[1]

    def as_substitution(self) -> Substitution:
        return Substitution(alphabet=self.alphabet, rules=self.rules)


def collar(s: Substitution) -> CollaredSystem:
    """One-sided 1-collared system: letters are the allowed 3-factors.

    The collared rule of (l,c,r) is read off the image word of l c r over the
    positions of the image of c, each decorated with its actual neighbours.
    """
    lang = factor_language(s, 3)
    idx = {a: i for i, a in enumerate(s.alphabet)}
    triples = sorted((w for w in lang if len(w) == 3),
                     key=lambda w: (idx[w[1]], idx[w[0]], idx[w[2]]))
    tripleset = set(triples)
    rules = {}
    for t in triples:
        l, c, r = t
        w = s.apply((l, c, r))
        start = len(s.rules[l])
        stop = start + len(s.rules[c])
        out = []
        for i in range(start, stop):
            col = (w[i - 1], w[i], w[i + 1])
            if col not in tripleset:
                raise CollarUndefined("image collar %r not an allowed 3-factor" % (col,))
            out.append(col)
        rules[t] = tuple(out)
    return CollaredSystem(alphabet=tuple(triples), rules=rules, base=s)


def collared_two_factors(s: Substitution, cs: CollaredSystem) -> frozenset:
    """Allowed adjacent pairs of collared letters, from base 4-factors."""
    lang4 = factor_language(s, 4)
    pairs = set()
    for w in lang4:
        if len(w) == 4:
            t1 = (w[0], w[1], w[2])
            t2 = (w[1], w[2], w[3])
            pairs.add((t1, t2))
    return frozenset(pairs)


def two_factors(s: Substitution) -> frozenset:
    return frozenset(w for w in factor_language(s, 2) if len(w) == 2)


@dataclass(frozen=True)
class PFData:
    minpoly: tuple          # monic integer coefficients, ascending
    dilation: int | None    # the PF eigenvalue when rational (hence integer)
    pisot: str              # 'Pisot' | 'NotPisot' | 'Unknown'
    left_eigenvector: tuple  # of Fraction (rational case) or NFElem
    charpoly_irreducible: bool

    @property
    def is_rational(self):
        return self.dilation is not None


def _charpoly(M: Mat):
    sm = sympy.Matrix(M.rows, M.cols, lambda i, j: sympy.Rational(M.data[i][j]))
    x = sympy.Symbol("x")
    return sympy.Poly(sm.charpoly(x).as_expr(), x)


def _pisot_flag(minpoly_coeffs) -> str:
    deg = len(minpoly_coeffs) - 1
    if deg == 1:
        lam = -minpoly_coeffs[0]
        return "Pisot" if lam > 1 else "NotPisot"
    if deg == 2:
        # largest root > 1 (given); conjugate inside the unit interval exactly
        # when p(1) < 0 and p(-1) > 0
        c0, c1, _ = minpoly_coeffs
        p1 = c0 + c1 + 1
        pm1 = c0 - c1 + 1
        return "Pisot" if (p1 < 0 and pm1 > 0) else "NotPisot"
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(minpoly_coeffs)), x)
    roots = [sympy.CRootOf(poly, i) for i in range(deg)]
    moduli = sorted((sympy.Abs(r).evalf(40) for r in roots), reverse=True)
    tol = sympy.Float(float(PISOT_TOLERANCE), 40)
    for m in moduli[1:]:
        if abs(m - 1) <= tol:
            return "Unknown"
        if m >= 1:
            return "NotPisot"
    return "Pisot"


def pf_data(M: Mat) -> PFData:
    """Exact Perron-Frobenius data of a primitive nonnegative integer matrix."""
    if not is_primitive(M):
        raise ValueError("pf_data requires a primitive matrix")
    charpoly = _charpoly(M)
    x = charpoly.gen
    factors = sympy.factor_list(charpoly.as_expr())[1]
    # the PF eigenvalue is the spectral radius; pick the factor whose largest
    # real root is maximal
    best = None
    best_root = None
    for fac, mult in factors:
        p = sympy.Poly(fac, x)
        for i in range(p.degree()):
            r = sympy.CRootOf(p, i)
            if r.is_real and (best_root is None or r > best_root):
                best_root = r
                best = p
    if best is None:
        raise ArithmeticError("no real eigenvalue found (bug)")
    mono = best.monic()
    coeffs = tuple(int(c) for c in reversed(mono.all_coeffs()))
    deg = len(coeffs) - 1
    dilation = None
    if deg == 1:
        dilation = -coeffs[0]
    pisot = _pisot_flag(coeffs)
    irreducible = len(factors) == 1 and factors[0][1] == 1 and \
        sympy.Poly(factors[0][0], x).degree() == M.rows
    # exact left eigenvector: kernel of (M^T - lambda I)
    if dilation is not None:
        K = Mat([[M.data[j][i] - (dilation if i == j else 0) for j in range(M.rows)]
                 for i in range(M.rows)])
        kern = K.kernel_basis()
        if len(kern) != 1:
            raise ArithmeticError("PF eigenvalue not simple (contradicts primitivity)")
        nu = kern[0]
        if any(c < 0 for c in nu):
            nu = tuple(-c for c in nu)
        total = sum(nu)
        nu = tuple(c / total for c in nu)  # normalized to coordinate sum 1
    else:
        lam = NFElem.root(coeffs)
        rows = [[NFElem.const(coeffs, M.data[j][i]) - (lam if i == j else NFElem.const(coeffs, 0))
                 for j in range(M.rows)] for i in range(M.rows)]
        kern = nf_kernel_basis(rows)
        if len(kern) != 1:
            raise ArithmeticError("PF eigenvalue not simple (contradicts primitivity)")
        nu = tuple(kern[0])
    return PFData(minpoly=coeffs, dilation=dilation, pisot=pisot,
                  left_eigenvector=nu, charpoly_irreducible=irreducible)
