"""Developer smoke run: verify_extension rows on small windows."""

import sys
import time

sys.path.insert(0, "src")

from qcext.models import build_model
from qcext.coned import ConedSpace, ConedSpaceConfig
from qcext.chains import volume_cochain, zero_cochain
from qcext.extension import FamilyCochain, verify_extension


def show(tag, report):
    print("==", tag, "K =", report.k_value)
    for r in report.rows:
        print("  %-36s pass=%s bound=%s obs=%s %s"
              % (r.check, r.passed, r.bound, r.observed, r.note))
    print("  overall:", report.passed())


fam = lambda: FamilyCochain(2, "scalar",
                            (volume_cochain(0, 2), zero_cochain(2, "scalar", 1)))

t0 = time.time()
m = build_model("z2_z")
sp = ConedSpace(ConedSpaceConfig(m))
rep = verify_extension(sp, fam(), factor_truncation=2, radius=1,
                       truncations={0: 2, 1: 1}, quasi_shape=(1, 1, 1))
show("infinity mode", rep)
print("  %.1fs" % (time.time() - t0))

t0 = time.time()
mw = build_model("z2_z", "factor_generators")
spw = ConedSpace(ConedSpaceConfig(mw, relative_metric_mode="word_metric"))
repw = verify_extension(spw, fam(), factor_truncation=2, radius=1,
                        truncations={0: 2, 1: 1}, quasi_shape=(1, 1, 1))
show("word mode D=1", repw)
print("  %.1fs" % (time.time() - t0))
