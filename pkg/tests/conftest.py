import warnings

from hypothesis import HealthCheck, settings

from tunneltime import AdmissibilityWarning

settings.register_profile(
    "ci",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.filter_too_much],
)
settings.load_profile("ci")

warnings.simplefilter("ignore", AdmissibilityWarning)
