import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "kernel",
    deadline=None,
    max_examples=int(os.environ.get("KERNEL_EXAMPLES", 60)),
    suppress_health_check=[HealthCheck.too_slow],
    derandomize="KERNEL_SEED" in os.environ,
)
settings.load_profile("kernel")

# criterion lines recorded by test_acceptance, echoed after the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
