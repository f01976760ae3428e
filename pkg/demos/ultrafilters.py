"""
Ultrafilters from colorings of disagreement graphs
==================================================

"""

from finitecsp.ultrafilter import SetFilter, dictatorship_check, filter_report

# With the trivial filter the disagreement graph is K3^n; every 3-coloring,
# once the constants are fixed, is a coordinate projection
for n in (1, 2, 3):
    print(f"n={n}:", dictatorship_check(n))

# A filter based at x1 forces the extracted ultrafilter to be principal at x1
report = filter_report(SetFilter(["x1", "x2"], [["x1"]]))
print("filter at x1:", {k: v for k, v in report.items() if not k.startswith("_")})
