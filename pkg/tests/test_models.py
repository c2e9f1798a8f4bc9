import random

import pytest

from procverify.calc import RecDef, materialize_name
from procverify.equiv import equivalent
from procverify.errors import BadParams, UnknownModel
from procverify.lts import Lts, out, tau
from procverify.algebra import prefix
from procverify.models import (REGISTRY, basic, build, in_order, model_text, names, protocols,
                               simulate, valued)
from procverify.syntax import format_vpm, parse_ccs, parse_vpm
from procverify.vp import VpProcess, concretize

CHEAP = [n for n in names() if n not in ("abp", "abp2", "swp_gbn", "swp_sr", "simple_protocol")]


@pytest.mark.parametrize("name", names())
def test_every_model_builds(name):
    obj = build(name)
    assert isinstance(obj, (Lts, VpProcess, RecDef))
    text = model_text(name)
    if isinstance(obj, VpProcess):
        assert format_vpm(parse_vpm(text)) == text
    else:
        assert parse_ccs(text).names


@pytest.mark.parametrize("name", CHEAP)
def test_model_text_reloads_equivalent(name):
    obj = build(name)
    text = model_text(name)
    if isinstance(obj, VpProcess):
        assert equivalent(concretize(parse_vpm(text)), concretize(obj), "strong")
    elif isinstance(obj, Lts):
        rd = parse_ccs(text)
        top = [ln.split(":")[1].strip() for ln in text.splitlines() if ln.startswith("# initial agent:")]
        agents = top or [n for n in rd.names if materialize_name(n, rd).states and
                         equivalent(materialize_name(n, rd), obj, "strong")]
        assert agents and equivalent(materialize_name(agents[0], rd), obj, "strong")


def test_errors():
    with pytest.raises(UnknownModel):
        build("nope")
    with pytest.raises(BadParams):
        build("scheduler", {"n": "x"})
    with pytest.raises(BadParams):
        build("buffer", {"size": 2})
    with pytest.raises(BadParams):
        build("separation", {"U": "1,2", "V": "2"})
    with pytest.raises(BadParams):
        build("swp_gbn", {"n": 3})


def test_jobshop_and_star():
    assert len(build("jobshop").states) == 32
    s = build("star", {"actions": "a?"})
    assert len(s.states) == 1 and len(s.transitions) == 1


def test_scheduler_size():
    for n in (2, 3):
        assert len(build("scheduler", {"n": n}).states) <= 64 * (n - 1)
    assert len(build("scheduler", {"n": 2}).states) <= 64


@pytest.mark.parametrize("n", [2, 3])
def test_dispatcher(n):
    sys_, spec = build("dispatcher", {"n": n}), build("dispatcher", {"n": n, "which": "Spec"})
    assert equivalent(sys_, prefix(tau, spec), "cong")
    assert equivalent(sys_, spec, "weak")


@pytest.mark.parametrize("n", [2, 3])
def test_scheduler_hide(n):
    sch = build("scheduler", {"n": n})
    hidden = basic.hide(sch, [basic.beta(i) for i in range(1, n + 1)])
    assert equivalent(hidden, basic.scheduler_rotation_spec(n), "weak")
    for i in range(1, n + 1):
        assert equivalent(basic.hide_all_but(sch, n, i), basic.scheduler_session_spec(i), "weak")


def test_semaphore():
    assert equivalent(build("semaphore"), build("semaphore", {"which": "Spec"}), "cong")


def test_square():
    sq = concretize(build("square"))
    assert not equivalent(sq, concretize(build("square_spec")), "weak")
    assert equivalent(sq, concretize(build("square_spec_buffered")), "weak")


def test_abp_file_concretizes_to_fixture():
    from procverify.models import FILES
    p = parse_vpm((FILES / "abp.vpm").read_text())
    c = concretize(p)
    assert p == parse_vpm(format_vpm(protocols.abp())) and len(c.states) == 1683


def test_buffer_model_file():
    from procverify.models import FILES
    p = parse_vpm((FILES / "buffer1.vpm").read_text())
    assert len(p.states) == 1 and len(p.transitions) == 2
    assert all(t.src == t.dst for t in p.transitions)


# ---------------------------------------------------------------- simulation

def test_simulate_nil():
    run = simulate(Lts.build("s", []), 10, seed=3)
    assert run.trace == [] and run.deadlock


def test_simulate_deterministic():
    p = build("abp")
    a, b = simulate(p, 300, seed=11), simulate(p, 300, seed=11)
    assert a.trace == b.trace and a.sigma == b.sigma


def test_simulate_bad_steps():
    with pytest.raises(BadParams):
        simulate(build("buf"), -1)


@pytest.mark.parametrize("seed", range(5))
def test_separation_paper_instance(seed):
    run = simulate(build("separation"), 100, seed=seed)
    assert run.deadlock and run.state in ("⟨C,a⟩", "⟨A,c⟩")


def _check_separation(u, v, seed):
    run = simulate(build("separation", {"U": u, "V": v}), 500, seed=seed)
    assert run.deadlock
    s, l = run.sigma["S"], run.sigma["L"]
    assert set(s) | set(l) == set(u) | set(v)
    assert len(s) == len(u) and len(l) == len(v)
    assert max(s) <= min(l)


def test_separation_random():
    rng = random.Random(5)
    for k in range(30):
        pool = rng.sample(range(6), rng.randint(2, 6))
        cut = rng.randint(1, min(3, len(pool) - 1))
        u, v = pool[:cut], pool[cut:cut + 3]
        _check_separation(u, v, seed=k)


def test_in_order():
    assert in_order([1, 2, 3], [1, 2])
    assert not in_order([1, 2, 3], [2])
    assert not in_order([1, 2], [1, 1])


@pytest.mark.parametrize("name", ["swp_gbn", "swp_sr", "abp2"])
def test_duplex_delivery_smoke(name):
    run = simulate(build(name), 600, seed=1)
    assert not run.deadlock
    for k in (1, 2):
        sent, got = run.values(f"In{k}"), run.values(f"Out{3 - k}")
        assert in_order(sent, got)
