"""Affine deformations of discrete groups of Lorentz matrices.

Words are tuples of non-zero integers: ``k`` stands for generator ``k - 1``
and ``-k`` for its inverse.  A cocycle is stored by its values on the
generators and extended along words with ``t(ab) = t(a) + a t(b)``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .lorentz import boost, lorentz_inverse, lorentz_matrix, rotation

EPS_REL = 1e-8
DEDUP = 1e-7


class PresentationError(ValueError):
    """Raised when relations fail on the linear part or on the cocycle."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


def reduce_word(word):
    out = []
    for k in word:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def inverse_word(word):
    return tuple(-k for k in reversed(word))


@dataclass(frozen=True)
class HolonomyDatum:
    """Group element with its cocycle value; acts by ``p -> linear p + tau``."""

    word: tuple
    linear: np.ndarray
    tau: np.ndarray

    def compose(self, other):
        """The datum of ``self * other`` (apply ``other`` first)."""
        return HolonomyDatum(reduce_word(self.word + other.word),
                             self.linear @ other.linear,
                             self.tau + self.linear @ other.tau)

    def inverse(self):
        inv = lorentz_inverse(self.linear)
        return HolonomyDatum(inverse_word(self.word), inv, -inv @ self.tau)

    def apply(self, p):
        return deformed_apply(self, p)


def deformed_apply(h, p):
    """Affine action ``gamma p + tau_gamma`` (broadcasts over rows of ``p``)."""
    p = np.asarray(p, dtype=float)
    return p @ h.linear.T + h.tau


def identity_datum(dim):
    return HolonomyDatum((), np.eye(dim), np.zeros(dim))


@dataclass
class GroupPresentation:
    generators: list
    relations: list = field(default_factory=list)
    cocycle: list = None

    def __post_init__(self):
        self.generators = [lorentz_matrix(g) for g in self.generators]
        self.relations = [tuple(int(k) for k in r) for r in self.relations]
        dim = self.dim
        if self.cocycle is None:
            self.cocycle = [np.zeros(dim) for _ in self.generators]
        self.cocycle = [np.asarray(t, dtype=float) for t in self.cocycle]
        if len(self.cocycle) != len(self.generators):
            raise PresentationError("cocycle needs one vector per generator")
        for r in self.relations:
            if any(k == 0 or abs(k) > len(self.generators) for k in r):
                raise PresentationError(f"relation {r} uses an unknown generator")

    @property
    def dim(self):
        return self.generators[0].shape[0]

    def letter(self, k):
        g = HolonomyDatum((k,), self.generators[abs(k) - 1], self.cocycle[abs(k) - 1])
        return g if k > 0 else HolonomyDatum((k,), *_inverse_parts(g))

    def evaluate(self, word):
        h = identity_datum(self.dim)
        for k in word:
            h = h.compose(self.letter(k))
        return HolonomyDatum(tuple(word), h.linear, h.tau)

    def with_cocycle(self, cocycle):
        return GroupPresentation(self.generators, self.relations, cocycle)

    def relation_report(self):
        """Residuals of each relation on the linear part and on the cocycle."""
        rows = []
        for r in self.relations:
            h = self.evaluate(r)
            rows.append({"relation": r,
                         "linear": float(np.max(np.abs(h.linear - np.eye(self.dim)))),
                         "cocycle": float(np.max(np.abs(h.tau)))})
        return rows

    def validate(self, eps=EPS_REL):
        rows = self.relation_report()
        bad = [r for r in rows if r["linear"] > eps or r["cocycle"] > eps]
        if bad:
            raise PresentationError("presentation rejected: relation residuals above tolerance",
                                    {"relations": rows})
        return rows


def _inverse_parts(h):
    inv = lorentz_inverse(h.linear)
    return inv, -inv @ h.tau


def coboundary(P, v):
    """Cocycle values ``g v - v`` on the generators."""
    v = np.asarray(v, dtype=float)
    return [g @ v - v for g in P.generators]


@dataclass
class WordBall:
    """Distinct group elements reachable by reduced words of length <= L."""

    elements: list
    index: dict
    radius: int

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, word):
        return self.elements[self.index[reduce_word(word)]]

    def __contains__(self, word):
        return reduce_word(word) in self.index


def extend_cocycle(P, L, eps=EPS_REL, dedup=DEDUP):
    """Enumerate the word ball of radius ``L`` with linear parts and cocycle values.

    The presentation is validated first.  Words evaluating to the same matrix
    (max-norm distance below ``dedup``) are merged after checking that their
    cocycle values agree.
    """
    P.validate(eps)
    letters = [k for i in range(len(P.generators)) for k in (i + 1, -(i + 1))]
    layer = [identity_datum(P.dim)]
    words = [layer[0]]
    for _ in range(L):
        nxt = []
        for h in layer:
            for k in letters:
                if h.word and h.word[-1] == -k:
                    continue
                nxt.append(h.compose(P.letter(k)))
        words.extend(nxt)
        layer = nxt
    mats = np.array([h.linear.ravel() for h in words])
    tree = cKDTree(mats)
    pairs = tree.query_pairs(dedup, p=np.inf, output_type="ndarray")
    parent = np.arange(len(words))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    worst = 0.0
    for i, j in pairs:
        scale = max(1.0, float(np.max(np.abs(words[i].tau))))
        worst = max(worst, float(np.max(np.abs(words[i].tau - words[j].tau))) / scale)
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    if worst > eps * 10:
        raise PresentationError("cocycle is inconsistent on merged words", {"tau_mismatch": worst})
    elements, index, rep = [], {}, {}
    for i, h in enumerate(words):
        r = find(i)
        if r not in rep:
            rep[r] = len(elements)
            elements.append(h)
        index[h.word] = rep[r]
    return WordBall(elements, index, L)


def cocycle_defect(ball):
    """Largest violation of t(ab) = t(a) + a t(b) over pairs inside the ball."""
    worst = 0.0
    for w, i in ball.index.items():
        for cut in range(1, len(w)):
            a, b = w[:cut], w[cut:]
            if a in ball.index and b in ball.index:
                ha, hb, hab = ball[a], ball[b], ball.elements[i]
                worst = max(worst, float(np.max(np.abs(hab.tau - ha.tau - ha.linear @ hb.tau))))
    return worst


OCTAGON_TRANSLATION = 2.0 * np.arccosh(1.0 + np.sqrt(2.0))
OCTAGON_RELATION = (1, -2, 3, -4, -1, 2, -3, 4)


def builtin_octagon_group(cocycle=None):
    """Genus-2 group of the regular octagon with vertex angle pi/4.

    Generator ``k`` pairs opposite sides: a translation of length
    2 arccosh(1 + sqrt 2) along the axis through the origin at angle k pi/4.
    """
    gens = []
    for k in range(4):
        r = rotation(k * np.pi / 4)
        gens.append(r @ boost(OCTAGON_TRANSLATION) @ r.T)
    return GroupPresentation(gens, [OCTAGON_RELATION], cocycle)
