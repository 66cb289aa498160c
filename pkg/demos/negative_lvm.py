"""A datum that satisfies every LVMB condition but is not LVM.

Its fan is the fan over a twisted triangular prism, which is complete and
simplicial yet not the normal fan of any polytope.  Both criteria agree.
"""

from lvmbtoric import samples
from lvmbtoric.datum import check_lvm_bosio, raw_toric, validate
from lvmbtoric.fan import project_fan
from lvmbtoric.io import datum_from_json, dumps, hulls_certificate
from lvmbtoric.shephard import check_lvm_via_fan, support_function_oracle

d = datum_from_json(samples.raw("prism_datum"))
print("LVMB:", validate(d).is_lvmb)

ok, hv = check_lvm_bosio(d)
print("common point of all open hulls:", ok)
print("separation certificate:")
print(dumps(hulls_certificate(hv, d.members)))

print("non-polytopal by Shephard:", not check_lvm_via_fan(d, short_circuit=False)[0])
E, delta = raw_toric(d)
print("support-function LP finds heights:", support_function_oracle(project_fan(delta, E).base)[0])
