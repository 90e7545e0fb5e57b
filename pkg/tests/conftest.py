import time

import pytest

SESSION_T0 = time.perf_counter()


def pytest_collection_modifyitems(items):
    # run the acceptance gate last so its wall-clock budget covers the
    # whole suite
    items.sort(key=lambda item: item.module.__name__ == "test_acceptance")


@pytest.fixture(scope="session")
def session_t0():
    return SESSION_T0
