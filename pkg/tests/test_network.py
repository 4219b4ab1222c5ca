import json
import random
from fractions import Fraction

import pytest

from ksn.dataset import lattice, scatter
from ksn.errors import FormatError
from ksn.network import KolmogorovNetwork, load, save
from ksn.representer import SampleSet
from ksn.transfer import default_stack


@pytest.fixture
def step_net():
    pts = lattice(2, 5)
    vals = [1 if x[0] >= Fraction(1, 2) else 0 for x in pts]
    smp = SampleSet(2, tuple(pts), tuple(vals), "rational")
    return KolmogorovNetwork.fit(default_stack(2, "rational"), smp), smp


@pytest.fixture
def float_net():
    pts = scatter(2, 60, seed=3)
    rng = random.Random(3)
    vals = [rng.random() for _ in pts]
    smp = SampleSet(2, tuple(pts), tuple(vals), "float64")
    return KolmogorovNetwork.fit(default_stack(2), smp), smp


def test_step_reproduced_on_grid(step_net):
    net, smp = step_net
    for x, f in zip(smp.points, smp.values):
        assert net.eval(x) == f
    assert net.provenance.n_fitted == 25 and net.provenance.residual == 0


def test_unkeyed_point_gives_default(step_net):
    net, _ = step_net
    assert net.eval((Fraction(1, 3), Fraction(1, 7))) == 0


def test_eval_decomposes(float_net):
    net, smp = float_net
    x = smp.points[5]
    parts = [net.tables[k].lookup(net.stack.w(x, k)) for k in range(5)]
    assert net.eval(x) == sum(parts)


def test_float_round_trip_bit_identical(float_net, tmp_path):
    net, smp = float_net
    path = tmp_path / "net.json"
    save(net, path)
    back = load(path)
    rng = random.Random(0)
    probes = list(smp.points) + [(rng.random(), rng.random()) for _ in range(100)]
    for x in probes:
        assert repr(back.eval(x)) == repr(net.eval(x))
    assert back.dumps() == net.dumps()


def test_rational_round_trip_preserves_fractions(step_net, tmp_path):
    net, _ = step_net
    path = tmp_path / "net.json"
    save(net, path)
    back = load(path)
    assert back.tables == net.tables
    assert back.stack == net.stack
    data = json.loads(path.read_text())
    key, val = data["tables"][0]["entries"][0]
    assert "/" in key and "/" in val
    assert Fraction(key) == net.tables[0].entries[0][0]


def test_canonical_bytes(float_net, tmp_path):
    net, _ = float_net
    save(net, tmp_path / "a.json")
    save(net, tmp_path / "b.json")
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "b.json").read_bytes()
    assert a.endswith(b"\n")


def test_mismatched_table_count(step_net):
    net, _ = step_net
    data = net.to_dict()
    data["tables"].pop()
    with pytest.raises(FormatError) as info:
        KolmogorovNetwork.loads(json.dumps(data, indent=1))
    assert info.value.field == "tables"


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.update(version="2"), "version"),
    (lambda d: d.update(numeric_mode="decimal"), "numeric_mode"),
    (lambda d: d["stack"].update(r=9), "stack"),
    (lambda d: d["tables"][0]["entries"].append(["x", "1/1"]), "entries"),
    (lambda d: d["tables"][1]["entries"].append(["1/2", "1/1"]), "tables"),
    (lambda d: d.pop("provenance"), "provenance"),
])
def test_malformed_files(step_net, mutate, field):
    net, _ = step_net
    data = net.to_dict()
    mutate(data)
    with pytest.raises(FormatError) as info:
        KolmogorovNetwork.loads(json.dumps(data, indent=1))
    assert info.value.field == field


def test_json_syntax_error_has_line():
    with pytest.raises(FormatError) as info:
        KolmogorovNetwork.loads('{\n "version": "1",\n oops\n}')
    assert info.value.line == 3


def test_permuted_fit_same_outputs(float_net):
    net, smp = float_net
    order = list(range(len(smp)))
    random.Random(9).shuffle(order)
    perm = SampleSet(2, tuple(smp.points[i] for i in order), tuple(smp.values[i] for i in order))
    other = KolmogorovNetwork.fit(default_stack(2), perm)
    for x in smp.points:
        assert other.eval(x) == net.eval(x)


def test_eval_outside_cube(step_net):
    from ksn.errors import DomainError
    net, _ = step_net
    with pytest.raises(DomainError):
        net.eval((Fraction(3, 2), Fraction(0)))
