"""Free noncommutative polynomials over exact scalars, presented algebras
via terminating rewrite rules, normal forms, graded bases, and small tensor
powers.

Monomials are words: tuples of generator indices, the empty tuple being the
unit.  A Presentation fixes the generator order, and every rewrite rule must
strictly decrease the graded-lex order on words, which makes exhaustive
rewriting terminate.  Confluence is certified empirically per degree with
check_local_confluence, not assumed.
"""

import heapq
from itertools import product

from .scalars import Scalar, render


class PresentationError(Exception):
    pass


def word_key(w):
    """Graded-lex sort key, ascending."""
    return (len(w), w)


def _heap_key(w):
    # min-heap entry that pops the graded-lex LARGEST word first
    return (-len(w), tuple(-x for x in w), w)


class Presentation:
    """An algebra given by generators and a terminating rewrite system.

    rules: iterable of (lhs, rhs) with lhs a word and rhs a polynomial,
    both given in any form accepted by word()/poly coefficients.  Every
    rhs monomial must be strictly smaller than lhs in graded-lex order.
    """

    def __init__(self, generators, rules, field, max_degree=4, name=""):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        for g in self.generators:
            if not g or "*" in g or g == "1":
                raise PresentationError(f"bad generator name {g!r}")
        self.field = field
        self.max_degree = max_degree
        self.name = name
        self._gen_index = {g: i for i, g in enumerate(self.generators)}
        self._multichar = any(len(g) > 1 for g in self.generators)
        self.rules = []
        for lhs, rhs in rules:
            lw = self.word(lhs)
            if not lw:
                raise PresentationError("empty rule left side")
            rp = self._raw_poly(rhs)
            lk = word_key(lw)
            for v in rp:
                if word_key(v) >= lk:
                    raise PresentationError(
                        f"rule {self.word_text(lw)} -> {self.word_text(v)} "
                        "does not decrease the graded-lex order")
            self.rules.append((lw, rp))
        self._rules_by_first = {}
        for lw, rp in self.rules:
            self._rules_by_first.setdefault(lw[0], []).append((lw, rp, len(lw)))
        self._lhs_set = {lw for lw, _ in self.rules}
        self._max_lhs = max((len(lw) for lw, _ in self.rules), default=0)
        self._nf_cache = {}

    # words -----------------------------------------------------------------

    def word(self, spec):
        """Accept a word as an index tuple, a name sequence, or text."""
        if isinstance(spec, tuple) and all(isinstance(x, int) for x in spec):
            for x in spec:
                if not 0 <= x < len(self.generators):
                    raise PresentationError(f"generator index {x} out of range")
            return spec
        if isinstance(spec, str):
            return self._parse_word_text(spec)
        out = []
        for g in spec:
            if g not in self._gen_index:
                raise PresentationError(f"unknown generator {g!r}")
            out.append(self._gen_index[g])
        return tuple(out)

    def _parse_word_text(self, s):
        if s == "1" or s == "":
            return ()
        names = s.split("*") if "*" in s or self._multichar else list(s)
        out = []
        for g in names:
            if g not in self._gen_index:
                raise PresentationError(f"unknown generator {g!r} in {s!r}")
            out.append(self._gen_index[g])
        return tuple(out)

    def word_text(self, w):
        if not w:
            return "1"
        names = [self.generators[i] for i in w]
        return "*".join(names) if self._multichar else "".join(names)

    # coefficients ----------------------------------------------------------

    def coef(self, c):
        if isinstance(c, Scalar):
            if c.field != self.field:
                raise PresentationError("coefficient from a different field")
            return c
        if isinstance(c, int):
            return self.field.from_int(c)
        if isinstance(c, str):
            return self.field.parse(c)
        raise PresentationError(f"bad coefficient {c!r}")

    def _raw_poly(self, spec):
        """Dict word -> Scalar without normal-forming, zero terms dropped."""
        out = {}
        for wspec, c in spec.items():
            w = self.word(wspec)
            s = self.coef(c)
            if w in out:
                s = out[w] + s
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return out

    # rewriting -------------------------------------------------------------

    def _find_match(self, u):
        by_first = self._rules_by_first
        for i in range(len(u)):
            bucket = by_first.get(u[i])
            if not bucket:
                continue
            for lw, rp, L in bucket:
                if u[i:i + L] == lw:
                    return i, lw, rp
        return None

    def normal_word(self, w):
        """Normal form of a single word as a dict word -> Scalar."""
        hit = self._nf_cache.get(w)
        if hit is not None:
            return hit
        out = {}
        pending = {w: self.field.one}
        heap = [_heap_key(w)]
        while heap:
            u = heapq.heappop(heap)[2]
            c = pending.pop(u, None)
            if c is None or c.is_zero():
                continue
            if u != w:
                sub = self._nf_cache.get(u)
                if sub is not None:
                    for v, sc in sub.items():
                        acc = out.get(v)
                        acc = c * sc if acc is None else acc + c * sc
                        if acc.is_zero():
                            out.pop(v, None)
                        else:
                            out[v] = acc
                    continue
            m = self._find_match(u)
            if m is None:
                acc = out.get(u)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(u, None)
                else:
                    out[u] = acc
                continue
            i, lw, rp = m
            pre, post = u[:i], u[i + len(lw):]
            for rw, rc in rp.items():
                v = pre + rw + post
                nc = c * rc
                acc = pending.get(v)
                if acc is None:
                    if not nc.is_zero():
                        pending[v] = nc
                        heapq.heappush(heap, _heap_key(v))
                else:
                    acc = acc + nc
                    if acc.is_zero():
                        del pending[v]
                    else:
                        pending[v] = acc
        self._nf_cache[w] = out
        return out

    def is_normal_word(self, w):
        return self._find_match(w) is None

    # element constructors ----------------------------------------------------

    def gen(self, name):
        return NCPoly(self, {self.word(name): self.field.one}, _trusted=True)

    def unit(self, c=1):
        s = self.coef(c)
        if s.is_zero():
            return NCPoly(self, {}, _trusted=True)
        return NCPoly(self, {(): s}, _trusted=True)

    def zero_poly(self):
        return NCPoly(self, {}, _trusted=True)

    def poly(self, terms):
        return NCPoly(self, self._raw_poly(terms))

    def tensor(self, arity, terms):
        return TensorElement(self, arity, terms)

    def unit_tensor(self, arity, c=1):
        s = self.coef(c)
        if s.is_zero():
            return TensorElement(self, arity, {}, _trusted=True)
        return TensorElement(self, arity, {((),) * arity: s}, _trusted=True)

    # graded structure ---------------------------------------------------------

    def _suffix_reducible(self, w):
        top = min(self._max_lhs, len(w))
        for L in range(1, top + 1):
            if w[len(w) - L:] in self._lhs_set:
                return True
        return False

    def basis_level(self, degree):
        """Normal words of total degree exactly `degree`, graded-lex order."""
        level = [()]
        for _ in range(degree):
            nxt = []
            for w in level:
                for g in range(len(self.generators)):
                    v = w + (g,)
                    if not self._suffix_reducible(v):
                        nxt.append(v)
            level = nxt
        return level

    def graded_basis(self, degree):
        out = []
        level = [()]
        for d in range(degree + 1):
            if d:
                nxt = []
                for w in level:
                    for g in range(len(self.generators)):
                        v = w + (g,)
                        if not self._suffix_reducible(v):
                            nxt.append(v)
                level = nxt
            out.extend(level)
        return out

    # confluence ----------------------------------------------------------------

    def _reduce_once_at(self, w, pos, lw, rp):
        pre, post = w[:pos], w[pos + len(lw):]
        return {pre + rw + post: rc for rw, rc in rp.items()}

    def _nf_raw(self, raw):
        out = {}
        for w, c in raw.items():
            for v, sc in self.normal_word(w).items():
                acc = out.get(v)
                acc = c * sc if acc is None else acc + c * sc
                if acc.is_zero():
                    out.pop(v, None)
                else:
                    out[v] = acc
        return out

    def check_local_confluence(self, degree):
        """Resolve every rule overlap whose superposition fits in `degree`.

        Covers proper suffix-prefix overlaps (including a rule with itself)
        and containment of one left side inside another, which includes
        distinct rules sharing a left side.
        """
        failures = []
        checked = 0
        for i, (l1, r1) in enumerate(self.rules):
            for j, (l2, r2) in enumerate(self.rules):
                for k in range(1, min(len(l1), len(l2))):
                    if l1[len(l1) - k:] != l2[:k]:
                        continue
                    w = l1 + l2[k:]
                    if len(w) > degree:
                        continue
                    a = self._nf_raw(self._reduce_once_at(w, 0, l1, r1))
                    b = self._nf_raw(
                        self._reduce_once_at(w, len(l1) - k, l2, r2))
                    checked += 1
                    if a != b:
                        failures.append(self._confluence_failure(i, j, w, a, b))
                if i != j and len(l2) <= len(l1) <= degree:
                    for p in range(len(l1) - len(l2) + 1):
                        if l1[p:p + len(l2)] != l2:
                            continue
                        a = self._nf_raw(self._reduce_once_at(l1, 0, l1, r1))
                        b = self._nf_raw(self._reduce_once_at(l1, p, l2, r2))
                        checked += 1
                        if a != b:
                            failures.append(
                                self._confluence_failure(i, j, l1, a, b))
        return ConfluenceResult(self, degree, checked, failures)

    def _confluence_failure(self, i, j, w, a, b):
        return {
            "rule_pair": [i, j],
            "word": self.word_text(w),
            "first": _render_raw(self, a),
            "second": _render_raw(self, b),
        }

    # serialization ---------------------------------------------------------------

    def to_json(self):
        rules = []
        for lw, rp in self.rules:
            rhs = [{"mono": self.word_text(v), "coef": render(c)}
                   for v, c in sorted(rp.items(), key=lambda t: word_key(t[0]))]
            rules.append({"lhs": self.word_text(lw), "rhs": rhs})
        return {"generators": list(self.generators), "rules": rules,
                "max_degree": self.max_degree}

    @classmethod
    def from_json(cls, data, field, name=""):
        rules = []
        for r in data["rules"]:
            rhs = {}
            for t in r["rhs"]:
                rhs[t["mono"]] = t["coef"]
            rules.append((r["lhs"], rhs))
        return cls(data["generators"], rules, field,
                   max_degree=data.get("max_degree", 4), name=name)

    def __repr__(self):
        label = self.name or "presentation"
        return (f"<Presentation {label}: {len(self.generators)} generators, "
                f"{len(self.rules)} rules>")


def _render_raw(pres, raw):
    if not raw:
        return "0"
    parts = []
    for w in sorted(raw, key=word_key):
        parts.append(f"({render(raw[w])})*{pres.word_text(w)}")
    return " + ".join(parts)


class ConfluenceResult:
    def __init__(self, pres, degree, checked, failures):
        self.presentation = pres
        self.degree = degree
        self.checked = checked
        self.failures = failures
        self.passed = not failures

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {"degree": self.degree, "overlaps_checked": self.checked,
                "passed": self.passed, "failures": self.failures}

    def __repr__(self):
        state = "pass" if self.passed else f"FAIL({len(self.failures)})"
        return (f"<ConfluenceResult degree={self.degree} "
                f"checked={self.checked} {state}>")


class NCPoly:
    """Element of a presented algebra, always stored in normal form."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, raw, _trusted=False):
        self.pres = pres
        self.terms = dict(raw) if _trusted else pres._nf_raw(raw)

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((len(w) for w in self.terms), default=0)

    def _check(self, other):
        if other.pres is not self.pres:
            raise PresentationError("operands from different presentations")

    def __add__(self, other):
        if isinstance(other, NCPoly):
            self._check(other)
            out = dict(self.terms)
            for w, c in other.terms.items():
                acc = out.get(w)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = acc
            return NCPoly(self.pres, out, _trusted=True)
        if isinstance(other, (int, Scalar)):
            return self + self.pres.unit(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.pres, {w: -c for w, c in self.terms.items()},
                      _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.pres.unit(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.pres.coef(c)
        if c.is_zero():
            return self.pres.zero_poly()
        return NCPoly(self.pres, {w: c * s for w, s in self.terms.items()},
                      _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._check(other)
        pres = self.pres
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                c = c1 * c2
                for v, sc in pres.normal_word(w1 + w2).items():
                    acc = out.get(v)
                    acc = c * sc if acc is None else acc + c * sc
                    if acc.is_zero():
                        out.pop(v, None)
                    else:
                        out[v] = acc
        return NCPoly(pres, out, _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.pres.unit(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.pres.unit(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.pres is other.pres and self.terms == other.terms

    __hash__ = None

    def render(self):
        return _render_raw(self.pres, self.terms)

    def __repr__(self):
        return f"NCPoly({self.render()})"

    def to_json(self):
        return [{"mono": self.pres.word_text(w), "coef": render(c)}
                for w, c in sorted(self.terms.items(),
                                   key=lambda t: word_key(t[0]))]

    @classmethod
    def from_json(cls, data, pres):
        raw = {}
        for t in data:
            w = pres.word(t["mono"])
            c = pres.coef(t["coef"])
            raw[w] = raw.get(w, pres.field.zero) + c
        return cls(pres, raw)


class TensorElement:
    """Element of a tensor power of a presented algebra, slots in normal form."""

    __slots__ = ("pres", "arity", "terms")

    def __init__(self, pres, arity, raw, _trusted=False):
        self.pres = pres
        self.arity = arity
        if _trusted:
            self.terms = dict(raw)
            return
        out = {}
        for ws, c in raw.items():
            ws = tuple(pres.word(w) for w in ws)
            if len(ws) != arity:
                raise PresentationError(f"expected {arity} slots, got {len(ws)}")
            c = pres.coef(c)
            if c.is_zero():
                continue
            slots = [pres.normal_word(w) for w in ws]
            for combo in product(*(s.items() for s in slots)):
                v = tuple(t[0] for t in combo)
                sc = c
                for t in combo:
                    sc = sc * t[1]
                acc = out.get(v)
                acc = sc if acc is None else acc + sc
                if acc.is_zero():
                    out.pop(v, None)
                else:
                    out[v] = acc
        self.terms = out

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if other.pres is not self.pres:
            raise PresentationError("operands from different presentations")
        if other.arity != self.arity:
            raise PresentationError("tensor arity mismatch")

    def __add__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for ws, c in other.terms.items():
            acc = out.get(ws)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(ws, None)
            else:
                out[ws] = acc
        return TensorElement(self.pres, self.arity, out, _trusted=True)

    def __neg__(self):
        return TensorElement(self.pres, self.arity,
                             {ws: -c for ws, c in self.terms.items()},
                             _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = self.pres.coef(c)
        if c.is_zero():
            return TensorElement(self.pres, self.arity, {}, _trusted=True)
        return TensorElement(self.pres, self.arity,
                             {ws: c * s for ws, s in self.terms.items()},
                             _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        pres = self.pres
        out = {}
        for ws, c1 in self.terms.items():
            for vs, c2 in other.terms.items():
                c = c1 * c2
                slots = [pres.normal_word(w + v) for w, v in zip(ws, vs)]
                for combo in product(*(s.items() for s in slots)):
                    u = tuple(t[0] for t in combo)
                    sc = c
                    for t in combo:
                        sc = sc * t[1]
                    acc = out.get(u)
                    acc = sc if acc is None else acc + sc
                    if acc.is_zero():
                        out.pop(u, None)
                    else:
                        out[u] = acc
        return TensorElement(pres, self.arity, out, _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def outer(self, other):
        """Tensor product: arities add, no multiplication happens."""
        if other.pres is not self.pres:
            raise PresentationError("operands from different presentations")
        out = {}
        for ws, c1 in self.terms.items():
            for vs, c2 in other.terms.items():
                out[ws + vs] = c1 * c2
        return TensorElement(self.pres, self.arity + other.arity, out,
                             _trusted=True)

    def map_slots(self, fns):
        """Apply a per-slot linear map; fns[i] sends a normal word to a
        TensorElement.  Output arity is the sum of the image arities."""
        pres = self.pres
        total = None
        for ws, c in self.terms.items():
            piece = None
            for i, w in enumerate(ws):
                img = fns[i](w)
                piece = img if piece is None else piece.outer(img)
            piece = piece.scale(c)
            total = piece if total is None else total + piece
        if total is None:
            arity = sum(f(()).arity for f in fns)
            return TensorElement(pres, arity, {}, _trusted=True)
        return total

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.pres is other.pres and self.arity == other.arity
                and self.terms == other.terms)

    __hash__ = None

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for ws in sorted(self.terms, key=lambda t: tuple(word_key(w) for w in t)):
            mono = " (x) ".join(self.pres.word_text(w) for w in ws)
            parts.append(f"({render(self.terms[ws])})*[{mono}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"TensorElement({self.render()})"


# functional entry points kept for symmetry with the other modules

def normal_form(p, pres=None):
    if isinstance(p, NCPoly):
        return p
    return NCPoly(pres, p)


def multiply(p, r, pres=None):
    return p * r


def check_local_confluence(pres, degree):
    return pres.check_local_confluence(degree)


def graded_basis(pres, degree):
    return pres.graded_basis(degree)


def word_image(w, images, unit):
    """Multiplicative extension: the image of a word under gen -> images[i].

    Works for NCPoly images and TensorElement images alike; `unit` is the
    image of the empty word.
    """
    acc = unit
    for i in w:
        acc = acc * images[i]
    return acc


def poly_image(p, images, unit):
    total = None
    for w, c in p.terms.items():
        piece = word_image(w, images, unit).scale(c)
        total = piece if total is None else total + piece
    if total is None:
        return unit.scale(0)
    return total
