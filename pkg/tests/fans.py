"""Random fan builders shared by several test modules."""

from lvmbtoric.errors import LvmbError
from lvmbtoric.fan import Fan
from oracles import angle_sorted_complete_fan_r2


def random_r2_fan(rng):
    """A complete simplicial fan in R^2 on 3 to 8 random integer rays."""
    while True:
        rays = {(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(rng.randint(3, 8))}
        rays = [r for r in rays if r != (0, 0)]
        try:
            f0 = Fan.from_cones(2, rays, [])
        except LvmbError:
            continue
        cones = angle_sorted_complete_fan_r2(list(f0.rays))
        if cones is not None:
            return Fan.from_cones(2, f0.rays, cones)
