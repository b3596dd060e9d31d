"""Sixth-order convergence when the interface lines sit on grid lines.

The coefficient jumps by ten orders of magnitude between neighboring
panels, yet the compact scheme loses nothing: the on-interface rows are
seventh-order consistent and the whole solve converges like h^6.
"""

from crossfd import StudyConfig, run_convergence

report = run_convergence(StudyConfig(problem="ex41", scheme="high",
                                     jmin=2, jmax=6))
print(report.to_text())

final = report.levels[-1]
print(f"relative l2 error at J={final.J}: {final.eps_l2:.3e} "
      f"(observed order {final.order_l2:.1f})")
