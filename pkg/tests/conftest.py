from hypothesis import HealthCheck, settings

# Field construction and log tables are cached after the first hit, so a
# per-example deadline only ever trips on the unlucky first draw.
settings.register_profile(
    "uvprim",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("uvprim")
