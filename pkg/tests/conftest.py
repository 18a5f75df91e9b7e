from hypothesis import HealthCheck, settings

# Quadrature-backed checks and the jitted solver's first call are slow;
# wall-clock deadlines only add flakiness there.
settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")
