import pytest

from qhw.quiver import Quiver, Arrow, loop_quiver, rose_quiver, cycle_quiver


@pytest.fixture(scope="session")
def r1():
    return loop_quiver()


@pytest.fixture(scope="session")
def r2():
    return rose_quiver(2)


@pytest.fixture(scope="session")
def c2():
    return cycle_quiver(2)


@pytest.fixture(scope="session")
def c3():
    return cycle_quiver(3)


@pytest.fixture(scope="session")
def c4():
    return cycle_quiver(4)


@pytest.fixture(scope="session")
def ones2():
    # adjacency [[1, 1], [1, 1]]: a loop at each vertex and a 2-cycle
    return Quiver(
        ["1", "2"],
        [Arrow("a", "1", "1"), Arrow("b", "2", "1"),
         Arrow("c", "1", "2"), Arrow("d", "2", "2")],
    )


@pytest.fixture(scope="session")
def path12():
    return Quiver(["1", "2"], [Arrow("a", "1", "2")])


@pytest.fixture(scope="session")
def corpus(r1, r2, c2, c3, c4, ones2):
    return {"R1": r1, "R2": r2, "C2": c2, "C3": c3, "C4": c4, "ones2": ones2}


@pytest.fixture(scope="session")
def sink_free_corpus(corpus):
    return corpus
