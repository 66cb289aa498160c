"""Walk the smallest nontrivial datum through every stage of the toolkit.

Run with ``python3 demos/hopf_walkthrough.py``.
"""

from fractions import Fraction

from lvmbtoric import samples
from lvmbtoric.datum import (
    check_lvm_bosio, equivalent, from_toric, indispensable, to_toric, validate,
)
from lvmbtoric.fan import project_fan
from lvmbtoric.io import datum_from_json
from lvmbtoric.shephard import check_lvm_via_fan


def plain(x):
    if isinstance(x, (tuple, list)):
        return tuple(plain(y) for y in x)
    return str(x) if isinstance(x, Fraction) else x


def show(title, value):
    print(f"{title:<28} {plain(value)}")


d = datum_from_json(samples.raw("hopf4"))
show("points", d.ell)
show("family", d.members)

rep = validate(d)
show("generic / SEP / imbrication", (rep.generic_position, rep.sep, rep.imbrication))
show("indispensable", sorted(indispensable(d)))

E, delta = to_toric(d)
show("subspace E", E.vectors)
show("fan cones", [sorted(c) for c in delta.maximal])
pf = project_fan(delta, E)
show("projected rays", pf.base.rays)

ok, hv = check_lvm_bosio(d)
show("LVM (open hulls)", (ok, hv.point))
ok, pv = check_lvm_via_fan(d, short_circuit=False)
show("LVM (Shephard)", ok)

back = from_toric(E, delta)
show("round trip equivalent", equivalent(d, back))
