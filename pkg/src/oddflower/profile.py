"""Threshold profiles for the constructive steps.

The ``paper`` profile carries the exact constants derived from the flower.
They are far too small to be met by graphs of a few dozen vertices, so the
``desk`` profile substitutes larger values that keep every inequality
meaningful at small n.  Every threshold is still checked at runtime.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import InputError


@dataclass(frozen=True)
class Profile:
    name: str
    sqrt_gamma: Fraction       # side imbalance, |B|, and |V_i \ U_i| are measured against sqrt_gamma * n
    beta: Fraction             # bad vertices: in-degree > beta * n
    activity_margin: Fraction  # active: out-degree >= n/2 - activity_margin * n - 1/4
    out_floor: Fraction        # required out-degree off the bad set, as a fraction of n
    bad_out_floor: Fraction    # required out-degree on the bad set
    slack: Fraction            # a closing step needs more than slack * n candidates

    def to_json(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in asdict(self).items()}


def paper_profile(spec) -> Profile:
    from .flower import constants_of

    c = constants_of(spec)
    return Profile("paper", c.sqrt_gamma, c.beta, 2 * c.beta,
                   Fraction(2, 5), Fraction(1, 9), Fraction(1, 400))


DESK = dict(sqrt_gamma=Fraction(1, 4), beta=Fraction(1, 10), activity_margin=Fraction(1, 20),
            out_floor=Fraction(1, 4), bad_out_floor=Fraction(1, 9), slack=Fraction(1, 400))


def desk_profile(spec=None) -> Profile:
    return Profile("desk", **DESK)


def get_profile(profile, spec) -> Profile:
    if isinstance(profile, Profile):
        return profile
    if profile == "paper":
        return paper_profile(spec)
    if profile == "desk":
        return desk_profile(spec)
    raise InputError(f"unknown profile {profile!r}")
