"""Per-class truncation-error slopes measured against exact solutions.

Each row class claims a consistency order; refining the grid and tracking
h^-s |L_h u - F| at the rows of that class should show the claimed slope.
The aligned classes are audited on a problem with 1e10 coefficient
contrast, the near-interface classes on a gentler unaligned problem that
is asymptotic from h = 1/8 on.
"""

from crossfd import run_consistency_audit

expected = {"interior": 6, "gamma": 7, "cross": 7,
            "near_gamma4": 4, "near_cross4": 4,
            "near_gamma3": 3, "near_cross2": 2}

print("aligned classes on ex41:")
audit = run_consistency_audit("ex41", classes=["interior", "gamma", "cross"],
                              jmin=3, jmax=7)
for name, entry in audit.items():
    print(f"  {name:>12}: slope {entry['slope']:5.2f}  "
          f"(claimed {expected[name]})")

print("near-interface classes on the smooth unaligned problem:")
audit = run_consistency_audit(
    "smooth", classes=["near_gamma4", "near_cross4", "near_gamma3",
                       "near_cross2"], jmin=3, jmax=7)
for name, entry in audit.items():
    print(f"  {name:>12}: slope {entry['slope']:5.2f}  "
          f"(claimed {expected[name]})")
