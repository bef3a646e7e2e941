"""Untwisting a maximal double point of a quartic threefold on Pic = Zh + Ze.

h is the hyperplane class pulled back to the blow-up of the double point and
e the exceptional divisor.  The untwisting involution swaps the two points
of each fibre of the projection from the double point; it is regular off the
strict transforms of the 24 lines through the point, which have codimension
2 and so do not affect the action on divisor classes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateResult, MalformedInput

LINES_THROUGH_POINT = 24


@dataclass(frozen=True)
class PicardClass:
    """The class a*h + b*e."""

    a: int
    b: int

    def __add__(self, other):
        return PicardClass(self.a + other.a, self.b + other.b)

    def __rmul__(self, k):
        return PicardClass(k * self.a, k * self.b)

    def __str__(self):
        return f"{self.a}h{self.b:+d}e"


H = PicardClass(1, 0)
E = PicardClass(0, 1)


@dataclass(frozen=True)
class LatticeInvolution:
    """A 2x2 integer matrix acting on coordinate vectors (a, b); columns are the images of h and e."""

    matrix: tuple

    @classmethod
    def from_images(cls, h_image, e_image):
        h_image, e_image = PicardClass(*h_image), PicardClass(*e_image)
        return cls(((h_image.a, e_image.a), (h_image.b, e_image.b)))

    def __call__(self, c: PicardClass) -> PicardClass:
        (p, q), (r, s) = self.matrix
        return PicardClass(p * c.a + q * c.b, r * c.a + s * c.b)

    def compose(self, other):
        (p, q), (r, s) = self.matrix
        (w, x), (y, z) = other.matrix
        return LatticeInvolution(((p * w + q * y, p * x + q * z), (r * w + s * y, r * x + s * z)))

    @property
    def determinant(self):
        (p, q), (r, s) = self.matrix
        return p * s - q * r

    def is_involution(self):
        return self.compose(self).matrix == ((1, 0), (0, 1))


# tau*h = 3h - 4e, tau*e = 2h - 3e
QUARTIC_TAU = LatticeInvolution.from_images((3, -4), (2, -3))


def tau_action(c: PicardClass, tau: LatticeInvolution = QUARTIC_TAU) -> PicardClass:
    return tau(c)


def verify_projection_relations(tau: LatticeInvolution = QUARTIC_TAU) -> bool:
    """Check e + tau*e = 2(h - e) and h + tau*h = 4(h - e).

    The first holds because E maps onto a quadric under the projection,
    the second because a hyperplane section maps onto a quartic surface.
    """
    fibre_class = H + (-1) * E
    return (E + tau(E) == 2 * fibre_class) and (H + tau(H) == 4 * fibre_class)


@dataclass(frozen=True)
class MobileClass:
    """The class n*h - nu*e of the strict transform of a mobile system.

    ``nu`` may come out negative after an untwisting step applied to data no
    mobile system realizes; the lattice arithmetic is still reported.
    """

    n: int
    nu: int

    def __post_init__(self):
        for name in ("n", "nu"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise MalformedInput(f"{name} must be an integer, got {v!r}")
        if self.n < 1:
            raise MalformedInput(f"degree n must be >= 1, got {self.n}")

    @property
    def is_maximal(self):
        return self.nu > self.n

    def as_picard(self):
        return PicardClass(self.n, -self.nu)

    def to_dict(self):
        return {"n": self.n, "nu": self.nu}


def untwist_step(m: MobileClass) -> MobileClass:
    """n' = 3n - 2 nu, nu' = 4n - 3 nu."""
    image = tau_action(m.as_picard())
    if image.a < 1:
        raise DegenerateResult(f"untwisting {m.to_dict()} gives degree {image.a} < 1")
    return MobileClass(image.a, -image.b)


def untwist_loop(m: MobileClass) -> list:
    """Untwist while the double point stays maximal; returns the whole orbit."""
    orbit = [m]
    while orbit[-1].is_maximal:
        nxt = untwist_step(orbit[-1])
        if nxt.n >= orbit[-1].n:
            raise DegenerateResult(f"untwisting did not lower the degree at {orbit[-1].to_dict()}")
        orbit.append(nxt)
    return orbit
