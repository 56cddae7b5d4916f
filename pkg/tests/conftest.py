import pytest

CRITERION_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[CRITERION_LINES] = []


@pytest.fixture
def criterion_log(request):
    return request.config.stash[CRITERION_LINES]


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(CRITERION_LINES, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
