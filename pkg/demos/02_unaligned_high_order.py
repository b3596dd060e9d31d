"""High-order scheme when the cross point falls between grid lines.

The cross sits at (pi/5, pi/8), so no grid point ever lands on an
interface.  Points within one cell of a line get fourth-order rows built
from two-panel expansions; the handful of points diagonal to the cross get
rows derived on the fly from a small exact null-space solve.  Observed
convergence is around fifth order.
"""

from crossfd import StudyConfig, run_convergence

report = run_convergence(StudyConfig(problem="ex44", scheme="high",
                                     jmin=4, jmax=7))
print(report.to_text())
