import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from survmap.errors import InstanceFormatError
from survmap.instance_io import format_instance, parse_instance, read_instance, write_instance
from survmap.net_model import SpanningTree
from survmap.topologies import fig2_instance, random_instance

GOOD = """\
# tiny
pnode 0
pnode 1
pnode 2
pedge 0 0 1
pedge 1 1 2
pedge 2 2 0
lnode 0 maps 0
lnode 1 maps 2
ledge 0 0 1
srlg r1 0 1
route 0 2
tree 0 0
protects r1 0
"""


def test_parse_good_instance():
    inst = parse_instance(GOOD)
    assert inst.phys.num_edges == 3
    assert inst.logical.node_map == {0: 0, 1: 2}
    assert inst.mapping.routes == {0: (2,)}
    assert inst.trees == (SpanningTree(frozenset({0})),)
    assert inst.protects == {"r1": 0}


@pytest.mark.parametrize(
    "bad, line",
    [
        ("pnode 0\npnode 0\n", 2),
        ("pnode 0\npnode 1\npedge 0 0 0\n", 3),
        ("pnode 0\npnode 1\npedge 0 0 1\npedge 1 1 0\n", 4),
        ("pnode 0\npnode 1\npedge 0 0 5\n", 3),
        ("pnode 0\npnode 1\npedge 3 0 1\n", 3),
        ("pnode 0\npnode 1\npedge 0 0 1\nlnode 0 maps 0\nlnode 1 maps 0\n", 5),
        ("pnode 0\npnode 1\npedge 0 0 1\nbogus 1\n", 4),
        ("pnode 0\npnode 1\npedge 0 0 x\n", 3),
        ("pnode 0\npnode 1\npnode 2\npedge 0 0 1\n", 4),
    ],
)
def test_parse_errors_carry_line_numbers(bad, line):
    with pytest.raises(InstanceFormatError) as exc:
        parse_instance(bad)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_route_errors_point_at_route_line():
    text = GOOD.replace("route 0 2", "route 0 0")
    with pytest.raises(InstanceFormatError) as exc:
        parse_instance(text)
    assert exc.value.line == 12


def test_parallel_logical_edge_needs_augmented_flag():
    base = "pnode 0\npnode 1\npedge 0 0 1\nlnode 0 maps 0\nlnode 1 maps 1\nledge 0 0 1\n"
    with pytest.raises(InstanceFormatError):
        parse_instance(base + "ledge 1 1 0\n")
    inst = parse_instance(base + "ledge 1 1 0 augmented\n")
    assert inst.logical.augmented == {1}


def test_tree_and_protects_validation():
    with pytest.raises(InstanceFormatError):
        parse_instance(GOOD.replace("tree 0 0", "tree 1 0"))
    with pytest.raises(InstanceFormatError):
        parse_instance(GOOD.replace("protects r1 0", "protects r9 0"))
    with pytest.raises(InstanceFormatError):
        parse_instance(GOOD.replace("protects r1 0", "protects r1 3"))


def test_fig2_round_trip(tmp_path):
    inst = fig2_instance()
    text = format_instance(inst.phys, inst.logical, inst.srlgs, inst.mapping, header="fig2")
    path = tmp_path / "fig2.txt"
    write_instance(path, text)
    back = read_instance(path)
    assert back.phys == inst.phys and back.logical == inst.logical
    assert back.srlgs == inst.srlgs and back.mapping.routes == inst.mapping.routes
    assert path.read_bytes() == text.encode()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_random_round_trip_is_stable(seed):
    inst = random_instance(seed)
    text = format_instance(inst.phys, inst.logical, inst.srlgs, inst.mapping)
    back = parse_instance(text)
    assert format_instance(back.phys, back.logical, back.srlgs, back.mapping) == text


def test_write_to_stream():
    buf = io.StringIO()
    write_instance(buf, "pnode 0\n")
    assert buf.getvalue() == "pnode 0\n"
