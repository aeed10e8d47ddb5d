import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {marker.args[0]}: {verdict}")
