# Verification sweep
#
# The verify module runs every inequality over random Ginibre states with
# random POVMs and over a fixed suite of structured states. Each check
# yields a report whose margin rhs - lhs should be nonnegative.

from povminfo.verify import SweepConfig, format_value, run_structured_suite, run_sweep

summary = run_sweep(SweepConfig(count=10))
print(summary.table())

# Structured states show where the bounds are tight: classical states sit
# at zero margin, the Bell state at one bit.

structured = run_structured_suite(SweepConfig(count=0))
for r in structured.reports:
    if r.check_name == "theorem2":
        print(f"{r.state_descriptor:<14} margin {format_value(r.margin)}")
