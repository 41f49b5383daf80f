"""Developer smoke run: worked examples end to end, printed raw."""

import sys
from fractions import Fraction

sys.path.insert(0, "src")

from qcext.models import build_model
from qcext.coned import ConedSpace, ConedSpaceConfig
from qcext.chains import volume_cochain, zero_cochain, CochainSpec
from qcext.extension import (FamilyCochain, one_hot_family, trace, is_small,
                             theta, K_of)
from qcext.reconstruction import (edge_flow, psi, h_sequence,
                                  recover_projection_general,
                                  recover_projection_zn,
                                  minimal_admissible_n, minimal_admissible_m,
                                  edge_flow_delta_cochain)
from qcext.bbf import pairwise_distance, window_coset_universe, check_axioms


def check(label, got, want):
    flag = "ok " if got == want else "FAIL"
    print("%s %-34s got=%r want=%r" % (flag, label, got, want))


# --- trace example: (1, abab, ab) over ab<a> -> (ab, aba, ab) --------------
m = build_model("z_z")
sp = ConedSpace(ConedSpaceConfig(m))
e = m.from_word
B = sp.coset(e("a b a"), 0)
tr = trace(sp, (e(""), e("a b a b"), e("a b")), B)
check("trace coset terms", dict(tr.items()),
      {(e("a b"), e("a b a"), e("a b")): Fraction(1)})

# --- theta example 1: volume family on z2_z, ((0,0),(3,0),(0,4)) -> 6 ------
m2 = build_model("z2_z")
sp2 = ConedSpace(ConedSpaceConfig(m2))
vol = volume_cochain(0, 2)
fam = FamilyCochain(2, "scalar", (vol, zero_cochain(2, "scalar", 1)))
g0 = m2.syllable(0, (0, 0))
g1 = m2.syllable(0, (3, 0))
g2 = m2.syllable(0, (0, 4))
check("theta volume lattice triple", theta(sp2, fam, (g0, g1, g2)).value, 6)

# --- theta example 2: (t,(1,0),(0,1)) -> 1/2 -------------------------------
t = m2.syllable(1, (1,))
p1 = m2.syllable(0, (1, 0))
p2 = m2.syllable(0, (0, 1))
check("theta mixed triple", theta(sp2, fam, (t, p1, p2)).value, Fraction(1, 2))

# --- K in word mode = 0 for volume ------------------------------------------
m2w = build_model("z2_z", "factor_generators")
sp2w = ConedSpace(ConedSpaceConfig(m2w, relative_metric_mode="word_metric"))
famw = FamilyCochain(2, "scalar",
                     (volume_cochain(0, 2), zero_cochain(2, "scalar", 1)))
check("K word mode volume", K_of(sp2w, famw), 0)
check("K infinity mode volume", K_of(sp2, fam), 0)

# --- general recovery on z_z word mode: y = a^3 b a, B = <a> ----------------
mw = build_model("z_z", "factor_generators")
spw = ConedSpace(ConedSpaceConfig(mw, relative_metric_mode="word_metric"))
ew = mw.from_word
Ba = spw.coset(mw.identity, 0)
y = ew("a^3 b a")
proj = spw.projection(Ba, y)
check("projection a^3ba", proj, frozenset([ew("a^3")]))
n0 = minimal_admissible_n(spw, Ba, y)
print("    minimal admissible n:", n0)
rec = recover_projection_general(spw, Ba, y, n0)
check("recover general", rec.recovered, proj)
print("    vertex values:", {k: v for k, v in rec.vertex_values.items()})

# --- lattice recovery on z2_z: m = 4, z = (7,5) -> (7,5) --------------------
z = m2w.syllable(0, (7, 5))
recz = recover_projection_zn(sp2w, 0, m2w.identity, z, 4)
check("recover zn coords", recz.coordinates, (7, 5))
check("recover zn point", recz.recovered, z)

# --- bbf: d_<a>(<b>, a^3<b>) = 3 --------------------------------------------
Bb = spw.coset(mw.identity, 1)
Bb3 = spw.coset(ew("a^3"), 1)
check("pairwise distance", pairwise_distance(spw, Ba, Bb, Bb3), 3)

uni = window_coset_universe(spw, 2, {0: 2, 1: 2})
based = [spw.coset(mw.identity, 0), spw.coset(mw.identity, 1)]
repbbf = check_axioms(spw, uni, 1, x_pool=based, z_pool=based)
check("axiom0 max", repbbf.axiom0_max, 0)
check("minimal xi", repbbf.minimal_xi, 1)
check("axiom4 cross", repbbf.axiom4_cross_ok, True)
print("    axiom4 counts:", repbbf.axiom4_counts)
print("    report passed:", repbbf.passed())
