"""
Eigen-coordinates and forced unipotence on the two-variable resonant fixture.

The y-coordinates come from the inverse conjugacy.  A representation that
respects the weight grading must kill every y-monomial above the cutoff.
"""
from fractions import Fraction

from ncsiegel import fixtures
from ncsiegel.rep import extend_representation, forced_unipotence_check, weight_kill_cutoff
from ncsiegel.series import Radius
from ncsiegel.siegel import eigen_coordinates

f, r, params = fixtures.resonant_setup(6)
ec = eigen_coordinates(f, r, params)
print("eigenvalues:", [str(x) for x in ec.lambdas])
print("y o f = lambda y holds:", ec.relation_holds)
print("y1 up to degree 3 =", ec.ys[0].truncate(3))

table = fixtures.weight_table()
print("\ncutoff for weights", [str(w) for w in table.eigen_weights], "vs", [str(w) for w in table.conj_weights], "=", weight_kill_cutoff(table))

for name, rho in [("trivial", fixtures.trivial_rep()),
                  ("strictly upper", fixtures.upper_triangular_rep()),
                  ("diagonal", fixtures.non_equivariant_rep())]:
    v = forced_unipotence_check(rho, ec.ys, table)
    line = "%-15s %s" % (name, v.verdict)
    if v.witness is not None:
        line += "  witness y^%s" % (list(v.witness),)
    print(line)

# rho(y1) for the diagonal representation; the radius must exceed 5^-1
rho = fixtures.non_equivariant_rep()
print("\nrho(y1) =\n", extend_representation(rho, ec.ys[0], Radius(5, Fraction(1, 2))))
