"""Hom-bialgebra structures on presented algebras.

A structure is stored as generator tables: a comultiplication table sending
each generator to an arity-2 tensor, and a twisting-map table sending each
generator to an element.  Both extend multiplicatively.  The twisted flag
selects between the plain bialgebra reading (product = concatenation,
coproduct = table extension, twisting map along for the ride) and the
twisted reading where the product is alpha after multiplication and the
coproduct is the table extension after alpha.
"""

from .ncpoly import NCPoly, TensorElement, PresentationError, word_key
from .report import Report, timed
from .scalars import render


class MorphismError(Exception):
    """Raised when a proposed twisting map fails the morphism checks."""

    def __init__(self, report):
        self.report = report
        bad = ", ".join(c.name for c in report.failures())
        super().__init__(f"twisting map is not a bialgebra morphism: {bad}")


class HomBialgebra:

    def __init__(self, pres, delta_table, alpha_table=None, twisted=False,
                 name=""):
        self.pres = pres
        self.name = name or pres.name
        self.twisted = twisted
        ng = len(pres.generators)

        self.delta_gen = [None] * ng
        for gspec, val in delta_table.items():
            w = pres.word(gspec)
            if len(w) != 1:
                raise PresentationError(f"delta table key {gspec!r} is not a "
                                        "generator")
            if isinstance(val, TensorElement):
                te = val
            else:
                te = pres.tensor(2, val)
            if te.arity != 2:
                raise PresentationError("delta table values must have two legs")
            self.delta_gen[w[0]] = te
        for i, te in enumerate(self.delta_gen):
            if te is None:
                raise PresentationError(
                    f"generator {pres.generators[i]} missing from delta table")

        if alpha_table is None:
            self.alpha_gen = [pres.gen(g) for g in pres.generators]
            self.alpha_is_identity = True
        else:
            self.alpha_gen = [None] * ng
            for gspec, val in alpha_table.items():
                w = pres.word(gspec)
                if len(w) != 1:
                    raise PresentationError(f"alpha table key {gspec!r} is not "
                                            "a generator")
                p = val if isinstance(val, NCPoly) else pres.poly(val)
                self.alpha_gen[w[0]] = p
            for i, p in enumerate(self.alpha_gen):
                if p is None:
                    raise PresentationError(
                        f"generator {pres.generators[i]} missing from alpha "
                        "table")
            self.alpha_is_identity = all(
                p.terms == {(i,): pres.field.one}
                for i, p in enumerate(self.alpha_gen))

        self._alpha_word_cache = {}
        self._delta_word_cache = {}

    # the twisting map --------------------------------------------------------

    def alpha_word(self, w):
        hit = self._alpha_word_cache.get(w)
        if hit is None:
            acc = self.pres.unit(1)
            for i in w:
                acc = acc * self.alpha_gen[i]
            hit = self._alpha_word_cache[w] = acc
        return hit

    def alpha_poly(self, p):
        total = self.pres.zero_poly()
        for w, c in p.terms.items():
            total = total + self.alpha_word(w).scale(c)
        return total

    def alpha_tensor(self, t):
        fns = [self._alpha_slot] * t.arity
        return t.map_slots(fns)

    def _alpha_slot(self, w):
        img = self.alpha_word(w)
        return TensorElement(self.pres, 1,
                             {(v,): c for v, c in img.terms.items()},
                             _trusted=True)

    # products ----------------------------------------------------------------

    def product(self, u, v):
        """The instance's own multiplication (twisted when flagged)."""
        raw = u * v
        return self.alpha_poly(raw) if self.twisted else raw

    # coproducts ----------------------------------------------------------------

    def untwisted_delta_word(self, w):
        hit = self._delta_word_cache.get(w)
        if hit is None:
            acc = self.pres.unit_tensor(2)
            for i in w:
                acc = acc * self.delta_gen[i]
            hit = self._delta_word_cache[w] = acc
        return hit

    def untwisted_delta(self, p):
        total = self.pres.unit_tensor(2, 0)
        for w, c in p.terms.items():
            total = total + self.untwisted_delta_word(w).scale(c)
        return total

    def delta(self, p):
        """The instance's own comultiplication (twisted when flagged)."""
        if self.twisted:
            p = self.alpha_poly(p)
        return self.untwisted_delta(p)

    def delta_word(self, w):
        if self.twisted:
            return self.untwisted_delta(self.alpha_word(w))
        return self.untwisted_delta_word(w)

    def _delta_slot(self, w):
        return self.delta_word(w)

    # serialization ---------------------------------------------------------------

    def to_json(self):
        pres = self.pres
        out = pres.to_json()
        delta = {}
        alpha = {}
        for i, g in enumerate(pres.generators):
            te = self.delta_gen[i]
            legs = [{"legs": [pres.word_text(ws[0]), pres.word_text(ws[1])],
                     "coef": render(c)}
                    for ws, c in sorted(
                        te.terms.items(),
                        key=lambda t: (word_key(t[0][0]), word_key(t[0][1])))]
            delta[g] = legs
            alpha[g] = self.alpha_gen[i].to_json()
        out["delta"] = delta
        out["alpha"] = alpha
        out["twisted"] = self.twisted
        return out

    @classmethod
    def from_json(cls, data, field, name=""):
        from .ncpoly import Presentation
        pres = Presentation.from_json(data, field, name=name)
        delta_table = {}
        for g, legs in data["delta"].items():
            raw = {}
            for t in legs:
                key = (t["legs"][0], t["legs"][1])
                raw[key] = t["coef"]
            delta_table[g] = raw
        alpha_table = {}
        for g, terms in data["alpha"].items():
            raw = {}
            for t in terms:
                raw[t["mono"]] = t["coef"]
            alpha_table[g] = raw
        return cls(pres, delta_table, alpha_table,
                   twisted=data.get("twisted", False), name=name)

    def __repr__(self):
        kind = "twisted" if self.twisted else "plain"
        return f"<HomBialgebra {self.name or 'instance'} ({kind})>"


def delta(H, p):
    return H.delta(p)


def apply_alpha(H, p):
    return H.alpha_poly(p)


def pairwise_product(H, t1, t2):
    """Slotwise product of two arity-2 tensors using the instance product."""
    pres = H.pres
    total = pres.unit_tensor(2, 0)
    for (w1, w2), c1 in t1.terms.items():
        p1 = NCPoly(pres, {w1: pres.field.one}, _trusted=True)
        p2 = NCPoly(pres, {w2: pres.field.one}, _trusted=True)
        for (v1, v2), c2 in t2.terms.items():
            c = c1 * c2
            left = H.product(p1, NCPoly(pres, {v1: pres.field.one},
                                        _trusted=True))
            right = H.product(p2, NCPoly(pres, {v2: pres.field.one},
                                         _trusted=True))
            raw = {}
            for lw, lc in left.terms.items():
                for rw, rc in right.terms.items():
                    sc = c * lc * rc
                    acc = raw.get((lw, rw))
                    acc = sc if acc is None else acc + sc
                    if acc.is_zero():
                        raw.pop((lw, rw), None)
                    else:
                        raw[(lw, rw)] = acc
            total = total + TensorElement(pres, 2, raw, _trusted=True)
    return total


def verify_morphism(endo, H, degree=None):
    """Check that the generator table endo defines a bialgebra morphism:
    it preserves every defining relation and commutes with the coproduct."""
    pres = H.pres
    images = _endo_images(endo, pres)
    rep = Report(f"morphism on {H.name or 'instance'}")

    def img_word(w):
        acc = pres.unit(1)
        for i in w:
            acc = acc * images[i]
        return acc

    with timed() as tm:
        witness = None
        for k, (lw, rp) in enumerate(pres.rules):
            left = img_word(lw)
            right = pres.zero_poly()
            for v, c in rp.items():
                right = right + img_word(v).scale(c)
            if left != right:
                witness = {"rule": pres.word_text(lw),
                           "left": left.render(), "right": right.render()}
                break
    rep.add("relations_preserved", "fail" if witness else "pass",
            witness=witness, wall_time=tm.seconds)

    def endo_slot(w):
        img = img_word(w)
        return TensorElement(pres, 1, {(v,): c for v, c in img.terms.items()},
                             _trusted=True)

    with timed() as tm:
        witness = None
        for i, g in enumerate(pres.generators):
            left = H.untwisted_delta(images[i])
            right = H.untwisted_delta_word((i,)).map_slots([endo_slot,
                                                            endo_slot])
            if left != right:
                witness = {"generator": g, "left": left.render(),
                           "right": right.render()}
                break
    rep.add("comultiplication_preserved", "fail" if witness else "pass",
            witness=witness, wall_time=tm.seconds)
    return rep


def _endo_images(endo, pres):
    if isinstance(endo, (list, tuple)):
        images = list(endo)
        if len(images) != len(pres.generators):
            raise PresentationError("endomorphism table has wrong length")
        return [p if isinstance(p, NCPoly) else pres.poly(p) for p in images]
    images = [None] * len(pres.generators)
    for gspec, val in endo.items():
        w = pres.word(gspec)
        if len(w) != 1:
            raise PresentationError(f"table key {gspec!r} is not a generator")
        images[w[0]] = val if isinstance(val, NCPoly) else pres.poly(val)
    for i, p in enumerate(images):
        if p is None:
            raise PresentationError(
                f"generator {pres.generators[i]} missing from table")
    return images


def twist_hom_bialgebra(B, endo, name=""):
    """Twist a plain bialgebra along a verified endomorphism: the product
    becomes alpha after multiplication, the coproduct becomes the coproduct
    after alpha, and the bilinear data of any enclosing structure is kept."""
    if B.twisted:
        raise PresentationError("twist requires an untwisted base")
    rep = verify_morphism(endo, B)
    if not rep.passed:
        raise MorphismError(rep)
    pres = B.pres
    delta_table = {pres.generators[i]: te
                   for i, te in enumerate(B.delta_gen)}
    images = _endo_images(endo, pres)
    alpha_table = {pres.generators[i]: p for i, p in enumerate(images)}
    return HomBialgebra(pres, delta_table, alpha_table, twisted=True,
                        name=name or (B.name + "_twisted" if B.name else ""))


def verify_hom_bialgebra(H, degree):
    """Run the structure axioms over all basis monomials of total degree
    at most `degree`, using the instance's own product, coproduct, and
    twisting map."""
    pres = H.pres
    rep = Report(f"hom-bialgebra axioms on {H.name or 'instance'}")
    basis = pres.graded_basis(degree)
    one = pres.field.one
    mono = [NCPoly(pres, {w: one}, _trusted=True) for w in basis]
    names = [pres.word_text(w) for w in basis]
    n = len(basis)

    alpha_of = [H.alpha_poly(p) for p in mono]
    prod = {}

    def get_prod(i, j):
        p = prod.get((i, j))
        if p is None:
            p = prod[(i, j)] = H.product(mono[i], mono[j])
        return p

    with timed() as tm:
        witness = None
        for i in range(n):
            for j in range(n):
                left = H.alpha_poly(get_prod(i, j))
                right = H.product(alpha_of[i], alpha_of[j])
                if left != right:
                    witness = {"x": names[i], "y": names[j],
                               "left": left.render(), "right": right.render()}
                    break
            if witness:
                break
    rep.add("multiplicativity", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)

    with timed() as tm:
        witness = None
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = H.product(alpha_of[i], get_prod(j, k))
                    right = H.product(get_prod(i, j), alpha_of[k])
                    if left != right:
                        witness = {"x": names[i], "y": names[j], "z": names[k],
                                   "left": left.render(),
                                   "right": right.render()}
                        break
                if witness:
                    break
            if witness:
                break
    rep.add("hom_associativity", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)

    with timed() as tm:
        witness = None
        for i in range(n):
            left = H.delta(alpha_of[i])
            right = H.alpha_tensor(H.delta(mono[i]))
            if left != right:
                witness = {"x": names[i], "left": left.render(),
                           "right": right.render()}
                break
    rep.add("comultiplicativity", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)

    with timed() as tm:
        witness = None
        for i in range(n):
            D = H.delta(mono[i])
            left = D.map_slots([H._alpha_slot, H._delta_slot])
            right = D.map_slots([H._delta_slot, H._alpha_slot])
            if left != right:
                witness = {"x": names[i], "left": left.render(),
                           "right": right.render()}
                break
    rep.add("hom_coassociativity", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)

    with timed() as tm:
        witness = None
        for i in range(n):
            di = H.delta(mono[i])
            for j in range(n):
                left = H.delta(get_prod(i, j))
                right = pairwise_product(H, di, H.delta(mono[j]))
                if left != right:
                    witness = {"x": names[i], "y": names[j],
                               "left": left.render(), "right": right.render()}
                    break
            if witness:
                break
    rep.add("product_coproduct_compatibility", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)
    return rep
