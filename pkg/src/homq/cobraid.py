"""The cobraiding bilinear form on a presented Hom-bialgebra.

The form is stored on generator pairs plus unit columns and extended to
arbitrary elements by recursion: peel a generator off one slot and
comultiply the other.  On top of the evaluator sit the cobraided axiom
suite, the two scalar Yang-Baxter identities it implies, the
alpha-invariance check, and the power twist that composes the stored
form with iterates of the structure map.
"""

from .linalg import kernel_basis
from .ncpoly import NCPoly, PresentationError
from .report import Report, timed
from .scalars import render


class CobraidingError(Exception):
    """Raised when the form is evaluated outside its configured domain."""


class InjectivityError(Exception):
    """Raised when a power twist is requested for a non-injective
    structure map; carries the kernel witness."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(
            "structure map has a nontrivial kernel: "
            f"{witness['element']} (degree {witness['degree']})")


class CobraidingForm:
    """Bilinear form data on generator pairs.

    gen_table must list every pair the form is defined on, zeros
    included; a lookup outside the table is a configuration error, not
    an implicit zero.  unit_left holds values against the unit in the
    first slot, unit_right in the second.  Generators present in both
    unit maps form the covered set; verification ranges over monomials
    in covered generators only.

    The memo cache assumes every owner extends the form through the
    same comultiplication tables.
    """

    def __init__(self, pres, gen_table, unit_left, unit_right, unit_unit=1):
        self.pres = pres

        def gen_index(spec):
            w = pres.word(spec)
            if len(w) != 1:
                raise PresentationError(f"{spec!r} is not a generator")
            return w[0]

        self.gen_table = {}
        for (l, r), val in gen_table.items():
            self.gen_table[(gen_index(l), gen_index(r))] = pres.coef(val)
        self.unit_left = {gen_index(g): pres.coef(v)
                          for g, v in unit_left.items()}
        self.unit_right = {gen_index(g): pres.coef(v)
                           for g, v in unit_right.items()}
        self.unit_unit = pres.coef(unit_unit)
        self.covered = frozenset(i for i in self.unit_left
                                 if i in self.unit_right)
        for (i, j) in self.gen_table:
            if i not in self.covered or j not in self.covered:
                bad = pres.generators[j if i in self.covered else i]
                raise PresentationError(
                    f"gen_table mentions {bad} but the unit tables do not "
                    "cover it")
        self.cache = {}
        self._alt_cache = {}

    def covers(self, indices):
        return all(i in self.covered for i in indices)

    def covers_all(self):
        return len(self.covered) == len(self.pres.generators)

    def value(self, i, j):
        v = self.gen_table.get((i, j))
        if v is None:
            g = self.pres.generators
            raise CobraidingError(
                f"no configured value for the pair ({g[i]}, {g[j]})")
        return v

    def unit_value_left(self, j):
        v = self.unit_left.get(j)
        if v is None:
            raise CobraidingError(
                f"no configured value for the pair (1, {self.pres.generators[j]})")
        return v

    def unit_value_right(self, i):
        v = self.unit_right.get(i)
        if v is None:
            raise CobraidingError(
                f"no configured value for the pair ({self.pres.generators[i]}, 1)")
        return v

    def to_json(self):
        gens = self.pres.generators
        rows = [{"left": gens[i], "right": gens[j], "value": render(v)}
                for (i, j), v in sorted(self.gen_table.items())]
        return {"gen_table": rows,
                "unit_left": {gens[j]: render(v)
                              for j, v in sorted(self.unit_left.items())},
                "unit_right": {gens[i]: render(v)
                               for i, v in sorted(self.unit_right.items())},
                "unit_unit": render(self.unit_unit)}

    @classmethod
    def from_json(cls, data, pres):
        gen_table = {(row["left"], row["right"]): row["value"]
                     for row in data["gen_table"]}
        return cls(pres, gen_table, dict(data["unit_left"]),
                   dict(data["unit_right"]),
                   unit_unit=data.get("unit_unit", 1))


class CobraidedHomBialgebra:
    """A Hom-bialgebra together with a cobraiding form.

    The form tables are always the untwisted ones; alpha_power records
    how many times the structure map is applied to both slots before
    the tables are consulted (the power-twisted family keeps H fixed
    and replaces the form by its composite with alpha^n).
    """

    def __init__(self, H, form, alpha_power=0, name=""):
        if form.pres is not H.pres and form.pres.to_json() != H.pres.to_json():
            raise PresentationError("form and bialgebra disagree on the "
                                    "underlying presentation")
        self.H = H
        self.form = form
        self.alpha_power = alpha_power
        self.name = name or H.name
        self._value_cache = {}

    def word_pair_value(self, m, n):
        """Instance form on two monomial words (power twist applied)."""
        if not self.alpha_power:
            return word_value(self, m, n)
        key = (m, n)
        hit = self._value_cache.get(key)
        if hit is None:
            H = self.H
            pres = H.pres
            u = NCPoly(pres, {m: pres.field.one}, _trusted=True)
            v = NCPoly(pres, {n: pres.field.one}, _trusted=True)
            for _ in range(self.alpha_power):
                u = H.alpha_poly(u)
                v = H.alpha_poly(v)
            total = pres.field.zero
            for wm, cm in u.terms.items():
                for wn, cn in v.terms.items():
                    total = total + (cm * cn) * word_value(self, wm, wn)
            hit = self._value_cache[key] = total
        return hit

    def to_json(self):
        out = self.H.to_json()
        out["cobraiding"] = self.form.to_json()
        out["alpha_power"] = self.alpha_power
        return out

    def __repr__(self):
        extra = f", power {self.alpha_power}" if self.alpha_power else ""
        return f"<CobraidedHomBialgebra {self.name or 'instance'}{extra}>"


def word_value(C, m, n, second_slot_first=False):
    """Stored (untwisted) form on two monomial words.

    The recursion peels the leading generator off the first slot and
    comultiplies the second; with second_slot_first it does the mirror
    image whenever both slots are composite.  The two orders agree on
    well-formed instances, which is itself a certified property.
    """
    memo = C.form._alt_cache if second_slot_first else C.form.cache
    return _eval(C, m, n, second_slot_first, memo)


def _eval(C, m, n, second_first, memo):
    key = (m, n)
    hit = memo.get(key)
    if hit is not None:
        return hit
    H = C.H
    form = C.form
    field = H.pres.field
    if not m and not n:
        val = form.unit_unit
    elif not m:
        h, rest = n[0], n[1:]
        if not rest:
            val = form.unit_value_left(h)
        else:
            val = (_eval(C, (), rest, second_first, memo)
                   * _eval(C, (), (h,), second_first, memo))
    elif not n:
        g, rest = m[0], m[1:]
        if not rest:
            val = form.unit_value_right(g)
        else:
            val = (_eval(C, (g,), (), second_first, memo)
                   * _eval(C, rest, (), second_first, memo))
    elif len(m) == 1 and len(n) == 1:
        val = form.value(m[0], n[0])
    elif len(m) == 1 or (second_first and len(n) > 1):
        # comultiply the first slot against the second slot's leading
        # generator: R(x, hz) = sum R(x1, z) R(x2, h)
        h, z = n[0], n[1:]
        val = field.zero
        for (w1, w2), c in H.untwisted_delta_word(m).terms.items():
            val = val + c * (_eval(C, w1, z, second_first, memo)
                             * _eval(C, w2, (h,), second_first, memo))
    else:
        # peel the first slot's leading generator, comultiply the
        # second slot: R(g m', n) = sum R(g, n1) R(m', n2)
        g, rest = m[0], m[1:]
        val = field.zero
        for (w1, w2), c in H.untwisted_delta_word(n).terms.items():
            val = val + c * (_eval(C, (g,), w1, second_first, memo)
                             * _eval(C, rest, w2, second_first, memo))
    memo[key] = val
    return val


def eval_R(C, u, v):
    """Instance form on two elements, extended bilinearly."""
    pres = C.H.pres
    if not isinstance(u, NCPoly):
        u = pres.poly(u)
    if not isinstance(v, NCPoly):
        v = pres.poly(v)
    total = pres.field.zero
    for wm, cm in u.terms.items():
        for wn, cn in v.terms.items():
            total = total + (cm * cn) * C.word_pair_value(wm, wn)
    return total


def _eval_word_poly(C, w, p):
    total = C.H.pres.field.zero
    for wv, cv in p.terms.items():
        total = total + cv * C.word_pair_value(w, wv)
    return total


def _eval_poly_word(C, p, w):
    total = C.H.pres.field.zero
    for wu, cu in p.terms.items():
        total = total + cu * C.word_pair_value(wu, w)
    return total


def covered_basis(C, degree):
    """Basis monomials of total degree <= degree in covered generators."""
    covered = C.form.covered
    return [w for w in C.H.pres.graded_basis(degree)
            if all(i in covered for i in w)]


def verify_cobraided(C, degree):
    """Check the three cobraided axioms on all covered basis monomials
    of degree <= degree, with the instance's own product, coproduct,
    and structure map."""
    H = C.H
    pres = H.pres
    rep = Report(f"cobraided axioms on {C.name or 'instance'}")
    basis = covered_basis(C, degree)
    one = pres.field.one
    mono = [NCPoly(pres, {w: one}, _trusted=True) for w in basis]
    names = [pres.word_text(w) for w in basis]
    n = len(basis)

    alpha_of = [H.alpha_poly(p) for p in mono]
    delta_of = [list(H.delta(p).terms.items()) for p in mono]
    prod = {}

    def get_prod(i, j):
        p = prod.get((i, j))
        if p is None:
            p = prod[(i, j)] = H.product(mono[i], mono[j])
        return p

    with timed() as tm:
        witness = None
        for k in range(n):
            az = alpha_of[k]
            dz = delta_of[k]
            for i in range(n):
                ax = alpha_of[i]
                for j in range(n):
                    left = eval_R(C, get_prod(i, j), az)
                    right = pres.field.zero
                    for (z1, z2), c in dz:
                        right = right + c * (_eval_poly_word(C, ax, z1)
                                             * _eval_poly_word(C, alpha_of[j], z2))
                    if left != right:
                        witness = {"x": names[i], "y": names[j], "z": names[k],
                                   "left": render(left), "right": render(right)}
                        break
                if witness:
                    break
            if witness:
                break
    rep.add("first_slot_product_expansion", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)

    with timed() as tm:
        witness = None
        for i in range(n):
            ax = alpha_of[i]
            dx = delta_of[i]
            for j in range(n):
                ay = alpha_of[j]
                for k in range(n):
                    left = eval_R(C, ax, get_prod(j, k))
                    right = pres.field.zero
                    for (x1, x2), c in dx:
                        right = right + c * (_eval_word_poly(C, x1, alpha_of[k])
                                             * _eval_word_poly(C, x2, ay))
                    if left != right:
                        witness = {"x": names[i], "y": names[j], "z": names[k],
                                   "left": render(left), "right": render(right)}
                        break
                if witness:
                    break
            if witness:
                break
    rep.add("second_slot_product_expansion", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)

    with timed() as tm:
        witness = None
        pw = {}

        def wprod(u, v):
            p = pw.get((u, v))
            if p is None:
                pu = NCPoly(pres, {u: one}, _trusted=True)
                pv = NCPoly(pres, {v: one}, _trusted=True)
                p = pw[(u, v)] = H.product(pu, pv)
            return p

        for i in range(n):
            dx = delta_of[i]
            for j in range(n):
                dy = delta_of[j]
                left = pres.zero_poly()
                right = pres.zero_poly()
                for (x1, x2), cx in dx:
                    for (y1, y2), cy in dy:
                        c = cx * cy
                        lc = c * C.word_pair_value(x2, y2)
                        if not lc.is_zero():
                            left = left + wprod(y1, x1).scale(lc)
                        rc = c * C.word_pair_value(x1, y1)
                        if not rc.is_zero():
                            right = right + wprod(x2, y2).scale(rc)
                if left != right:
                    witness = {"x": names[i], "y": names[j],
                               "left": left.render(), "right": right.render()}
                    break
            if witness:
                break
    rep.add("braided_commutation", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)
    return rep


def verify_oqhybe(C, degree):
    """Check the two scalar Hom-Yang-Baxter identities implied by the
    cobraided axioms on all covered basis-monomial triples."""
    H = C.H
    pres = H.pres
    field = pres.field
    rep = Report(f"operator Yang-Baxter identities on {C.name or 'instance'}")
    basis = covered_basis(C, degree)
    one = field.one
    mono = [NCPoly(pres, {w: one}, _trusted=True) for w in basis]
    names = [pres.word_text(w) for w in basis]
    n = len(basis)
    delta_of = [list(H.delta(p).terms.items()) for p in mono]

    ra = {}

    def r_plain_alpha(m, w):
        # R(m, alpha(w)) for monomial words
        v = ra.get((m, w))
        if v is None:
            v = ra[(m, w)] = _eval_word_poly(C, m, H.alpha_word(w))
        return v

    la = {}

    def r_alpha_plain(w, m):
        # R(alpha(w), m)
        v = la.get((w, m))
        if v is None:
            v = la[(w, m)] = _eval_poly_word(C, H.alpha_word(w), m)
        return v

    with timed() as tm:
        witness = None
        for i in range(n):
            dx = delta_of[i]
            for j in range(n):
                dy = delta_of[j]
                for k in range(n):
                    dz = delta_of[k]
                    left = field.zero
                    right = field.zero
                    for (x1, x2), cx in dx:
                        for (y1, y2), cy in dy:
                            cxy = cx * cy
                            for (z1, z2), cz in dz:
                                c = cxy * cz
                                left = left + c * (
                                    r_plain_alpha(x1, y1)
                                    * r_plain_alpha(x2, z1)
                                    * C.word_pair_value(y2, z2))
                                right = right + c * (
                                    C.word_pair_value(y1, z1)
                                    * r_plain_alpha(x1, z2)
                                    * r_plain_alpha(x2, y2))
                    if left != right:
                        witness = {"x": names[i], "y": names[j], "z": names[k],
                                   "left": render(left), "right": render(right)}
                        break
                if witness:
                    break
            if witness:
                break
    rep.add("operator_ybe_first_form", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)

    with timed() as tm:
        witness = None
        for i in range(n):
            dx = delta_of[i]
            for j in range(n):
                dy = delta_of[j]
                for k in range(n):
                    dz = delta_of[k]
                    left = field.zero
                    right = field.zero
                    for (x1, x2), cx in dx:
                        for (y1, y2), cy in dy:
                            cxy = cx * cy
                            for (z1, z2), cz in dz:
                                c = cxy * cz
                                left = left + c * (
                                    C.word_pair_value(x1, y1)
                                    * r_alpha_plain(x2, z1)
                                    * r_alpha_plain(y2, z2))
                                right = right + c * (
                                    r_alpha_plain(y1, z1)
                                    * r_alpha_plain(x1, z2)
                                    * C.word_pair_value(x2, y2))
                    if left != right:
                        witness = {"x": names[i], "y": names[j], "z": names[k],
                                   "left": render(left), "right": render(right)}
                        break
                if witness:
                    break
            if witness:
                break
    rep.add("operator_ybe_second_form", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)
    return rep


def check_alpha_invariance(C, degree):
    """Check that applying the structure map to both slots leaves the
    instance form unchanged on covered basis monomials."""
    H = C.H
    pres = H.pres
    rep = Report(f"alpha invariance on {C.name or 'instance'}")
    basis = covered_basis(C, degree)
    names = [pres.word_text(w) for w in basis]
    alpha_of = [H.alpha_word(w) for w in basis]
    n = len(basis)
    with timed() as tm:
        witness = None
        for i in range(n):
            for j in range(n):
                left = eval_R(C, alpha_of[i], alpha_of[j])
                right = C.word_pair_value(basis[i], basis[j])
                if left != right:
                    witness = {"x": names[i], "y": names[j],
                               "left": render(left), "right": render(right)}
                    break
            if witness:
                break
    rep.add("alpha_invariance", "fail" if witness else "pass",
            witness=witness, degree=degree, wall_time=tm.seconds)
    return rep


def alpha_kernel_witness(H, degree=None):
    """Search the graded pieces up to `degree` (default: the
    presentation's max degree) for a nonzero element killed by the
    structure map.  Returns None when every piece has trivial kernel."""
    pres = H.pres
    field = pres.field
    if degree is None:
        degree = pres.max_degree
    if H.alpha_is_identity:
        return None
    for d in range(1, degree + 1):
        words = pres.basis_level(d)
        if not words:
            break
        images = [H.alpha_word(w) for w in words]
        support = sorted({m for p in images for m in p.terms},
                         key=lambda w: (len(w), w))
        row_of = {m: r for r, m in enumerate(support)}
        rows = [[field.zero] * len(words) for _ in support]
        for col, p in enumerate(images):
            for m, c in p.terms.items():
                rows[row_of[m]][col] = c
        for vec in kernel_basis(rows, len(words), field):
            elt = pres.zero_poly()
            for c, w in zip(vec, words):
                if not c.is_zero():
                    elt = elt + NCPoly(pres, {w: c}, _trusted=True)
            if not elt.is_zero():
                return {"degree": d, "element": elt.render()}
    return None


def twist_R_power(C, n):
    """Compose the instance form with n extra iterates of the structure
    map in both slots.  Requires the structure map to be injective on
    every graded piece up to the presentation's max degree."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    if n == 0:
        return C
    witness = alpha_kernel_witness(C.H)
    if witness is not None:
        raise InjectivityError(witness)
    return CobraidedHomBialgebra(C.H, C.form,
                                 alpha_power=C.alpha_power + n, name=C.name)
