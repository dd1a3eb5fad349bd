import pytest

from phylorel.tree import parse_tree


def tree(text, rooted=False):
    header = "#rooted\n" if rooted else "#unrooted\n"
    return parse_tree(header + text)


@pytest.fixture
def quartet_tree():
    # ab|cd with interior p (a, b) and q (c, d); only the interior edge carries an event
    return tree("((a:0,b:0)p:1,c:0,d:0)q;")


@pytest.fixture
def caterpillar5():
    # x1,x2 hang off v1, y off v2, z1,z2 off v3
    return tree("((x1,x2)A,y,(z1,z2)C)B;")
