import os

from hypothesis import HealthCheck, settings

# Seeded and bounded so the whole suite stays fast and reproducible;
# HYPOTHESIS_PROFILE=thorough widens the search.
settings.register_profile(
    "repo", max_examples=50, derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))
