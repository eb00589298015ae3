"""Both evaluation engines: whole-domain iteration and demand-driven solving."""

import numpy as np
import pytest

from hofix.errors import ChainViolation, ResourceLimit
from hofix.lattice import boolean, flat, powerset, two
from hofix.signature import BaseSymbol, Signature, builtin, table_symbol, value_interp
from hofix.syntax import App, Lam, beta_normalize, parse_term, parse_type
from hofix.typecheck import typecheck
from hofix.types import Fun, GROUND, PLUS
from hofix.values import ArrayTable, canonical_value
from hofix.evaluator import eval_global, eval_local


def logic_sig():
    return Signature(
        [
            builtin("and", shortcircuit=True),
            builtin("or", shortcircuit=True),
            builtin("not"),
            builtin("join"),
            builtin("meet"),
        ]
    )


def constant(name, element):
    return BaseSymbol(name, GROUND, value_interp(lambda lat, args: element))


def run_both(text, sig, lat, var_types=None, env=None, args=None):
    term = parse_term(text)
    lv, ls = eval_local(term, sig, lat, var_types, env=env, args=args)
    gv, gs = eval_global(term, sig, lat, var_types, env=env, args=args)
    assert canonical_value(lv) == canonical_value(gv)
    return lv, ls, gs


def test_greatest_fixpoint_of_identity_is_top():
    lv, ls, gs = run_both("nu x. x", logic_sig(), boolean())
    assert lv == 1
    assert ls.fixpoints[0].height == 2  # one sweep to confirm stability
    assert gs.fixpoints[0].height == 2


def test_least_fixpoint_of_identity_is_bot():
    lv, ls, _ = run_both("mu x. x", logic_sig(), boolean())
    assert lv == 0
    assert ls.fixpoints[0].width == 1


def test_ground_chain_climbs_one_step_per_round():
    """mu x. join(x, a) over the flat lattice: bot, then the atom, stable."""
    lat = flat(1)
    sig = logic_sig()
    sig.add(constant("a", lat.element_index("0")))
    lv, ls, gs = run_both("mu x. join(x, a)", sig, lat)
    assert lat.show(lv) == "0"
    assert ls.fixpoints[0].height == 3
    assert gs.fixpoints[0].height == 3


def test_function_valued_fixpoint_tabulates_globally():
    lat = two()
    sig = logic_sig()
    vts = {"F": parse_type("(o+) -> o")}
    term = parse_term("mu F(x+). or(x, F(x))")
    value, stats = eval_global(term, sig, lat, vts)
    assert isinstance(value, ArrayTable)
    assert list(value.arr) == [0, 1]
    assert stats.fixpoints[0].width == lat.size


def test_local_discovers_only_the_queried_cell():
    lat = two()
    sig = logic_sig()
    vts = {"F": parse_type("(o+) -> o")}
    term = parse_term("mu F(x+). or(x, F(x))")
    value, stats = eval_local(term, sig, lat, vts, args=[1])
    assert value == 1
    f = stats.fixpoints[0]
    assert f.width == 1
    assert [key[-1] for key in f.keys] == [1]


def test_short_circuit_blocks_discovery():
    """and(ff, F(x)) never forces the recursive operand, so the fixpoint
    stays at the single queried cell."""
    lat = boolean()
    sig = logic_sig()
    sig.add(constant("ff", lat.bot))
    vts = {"F": parse_type("(o+) -> o")}
    term = parse_term("(mu F(x+). and(ff, F(x)))(tt)")
    sig.add(constant("tt", lat.top))
    value, stats = eval_local(term, sig, lat, vts)
    assert value == lat.bot
    assert stats.fixpoints[0].width == 1


def test_forced_operand_discovers_dependencies():
    lat = boolean()
    sig = logic_sig()
    sig.add(constant("ff", lat.bot))
    # querying bot does not short-circuit or(x, ...), so F(not(x)) is
    # forced and pulls the second cell into the solved set
    term = parse_term("(mu F(x+-). or(x, F(not(x))))(ff)")
    vts = {"F": parse_type("(o+-) -> o")}
    value, stats = eval_local(term, sig, lat, vts)
    assert value == lat.top
    assert stats.fixpoints[0].width == 2


def test_args_apply_to_function_results():
    lat = two()
    sig = logic_sig()
    vts = {"F": parse_type("(o+) -> o")}
    term = parse_term("mu F(x+). or(x, F(x))")
    lv, _ = eval_local(term, sig, lat, vts, args=[0])
    gv, _ = eval_global(term, sig, lat, vts, args=[0])
    assert lv == gv == 0


def test_free_variables_read_from_env():
    lat = boolean()
    sig = logic_sig()
    vts = {"y": GROUND}
    term = parse_term("mu x. join(x, y)")
    for y in (0, 1):
        lv, _ = eval_local(term, sig, lat, vts, env={"y": y})
        gv, _ = eval_global(term, sig, lat, vts, env={"y": y})
        assert lv == gv == y


def test_nested_fixpoints_and_stat_order():
    lat = boolean()
    sig = logic_sig()
    lv, ls, gs = run_both("mu x. join(x, nu y. meet(y, x))", sig, lat)
    assert lv == 0
    assert [f.var for f in ls.fixpoints] == ["x", "y"]
    assert {f.var for f in gs.fixpoints} == {"x", "y"}


def test_inner_fixpoint_resolves_under_each_outer_binding():
    """The inner greatest fixpoint equals the current outer value, so the
    outer chain climbs bot -> atom and the inner one is re-solved under
    each binding: the demand-driven engine records a fresh inner fixpoint
    per outer value, the whole-domain engine accumulates into one."""
    lat = flat(1)
    sig = logic_sig()
    sig.add(constant("a", lat.element_index("0")))
    term_text = "mu x. join(nu y. meet(y, x), a)"
    lv, ls, gs = run_both(term_text, sig, lat)
    assert lat.show(lv) == "0"
    assert [(f.var, f.width, f.height, f.body_evals) for f in ls.fixpoints] == [
        ("x", 1, 3, 2),
        ("y", 1, 3, 2),
        ("y", 1, 3, 2),
    ]
    assert [(f.var, f.body_evals) for f in gs.fixpoints] == [("x", 2), ("y", 4)]


def test_chain_violation_detected():
    """A lying base symbol (declared monotone, actually negation) makes the
    iteration step downward during a least fixpoint; both engines raise."""
    lat = boolean()
    sig = logic_sig()
    sig.add(
        BaseSymbol(
            "sneaky",
            Fun(((GROUND, PLUS),), GROUND),
            value_interp(lambda lattice, args: 1 - int(args[0])),
        )
    )
    term = parse_term("mu x. sneaky(sneaky(sneaky(x)))")
    with pytest.raises(ChainViolation):
        eval_global(term, sig, lat)
    with pytest.raises(ChainViolation):
        eval_local(term, sig, lat)


def test_resource_limit_on_huge_domain():
    lat = flat(8)
    sig = logic_sig()
    vts = {"F": parse_type("((o+) -> o +) -> o"), "f": parse_type("(o+) -> o")}
    term = parse_term(r"(mu F(f+). f(F(f)))(\x+. x)")
    vts["x"] = GROUND
    with pytest.raises(ResourceLimit):
        eval_global(term, sig, lat, vts, cap=100)


def test_local_and_global_agree_on_higher_order_terms():
    lat = two()
    sig = logic_sig()
    vts = {
        "F": parse_type("((o+) -> o +) -> o"),
        "f": parse_type("(o+) -> o"),
        "x": GROUND,
        "x1": GROUND,
    }
    text = r"(nu F(f+). and(f(F(f)), F(\x+. f(f(x)))))(\x1+. x1)"
    run_both(text, sig, lat, vts)


def test_determinism():
    lat = powerset(["a", "b"])
    sig = logic_sig()
    vts = {"F": parse_type("(o+) -> o")}
    term_text = "(mu F(x+). join(x, F(meet(x, x))))(ab)"
    sig.add(constant("ab", lat.top))
    runs = []
    for _ in range(2):
        term = parse_term(term_text)
        value, stats = eval_local(term, sig, lat, vts)
        f = stats.fixpoints[0]
        runs.append((canonical_value(value), f.width, f.height, f.body_evals, tuple(map(repr, f.keys))))
    assert runs[0] == runs[1]


def test_persistence_modes_agree():
    lat = boolean()
    sig = logic_sig()
    sig.add(constant("tt", lat.top))
    vts = {"F": parse_type("(o+-) -> o")}
    term_text = "(mu F(x+-). or(x, F(not(x))))(tt)"
    v1, s1 = eval_local(parse_term(term_text), sig, lat, vts, reuse_fixpoint_tables=True)
    v2, s2 = eval_local(parse_term(term_text), sig, lat, vts, reuse_fixpoint_tables=False)
    assert v1 == v2
    assert s1.fixpoints[0].width == s2.fixpoints[0].width


def test_operand_fast_paths_preserve_results_and_stats():
    """Bulk tabulation of fixpoint-application operands is an optimization
    only: disabling it must not change values or discovery statistics."""
    lat = two()
    sig = logic_sig()
    vts = {
        "F": parse_type("((o+) -> o +) -> o"),
        "f": parse_type("(o+) -> o"),
        "x": GROUND,
        "x1": GROUND,
    }
    text = r"(nu F(f+). and(f(F(f)), F(\x+. f(f(x)))))(\x1+. x1)"
    v1, s1 = eval_local(parse_term(text), sig, lat, vts, fast_tables=True)
    v2, s2 = eval_local(parse_term(text), sig, lat, vts, fast_tables=False)
    assert canonical_value(v1) == canonical_value(v2)
    key1 = [(f.var, f.width, f.height, f.body_evals) for f in s1.fixpoints]
    key2 = [(f.var, f.width, f.height, f.body_evals) for f in s2.fixpoints]
    assert key1 == key2


def test_beta_normalize_contracts_all_redexes():
    term = parse_term(r"(\x+. or(x, (\z+. z)(x)))(y)")

    def has_redex(t):
        if isinstance(t, App):
            return isinstance(t.fn, Lam) or has_redex(t.fn) or any(map(has_redex, t.args))
        if isinstance(t, Lam):
            return has_redex(t.body)
        return False

    norm = beta_normalize(term, reserved={"or"})
    assert not has_redex(norm)


def test_beta_normalize_preserves_type_and_meaning():
    lat = boolean()
    sig = logic_sig()
    vts = {"y": GROUND, "x": GROUND, "z": GROUND, "g": parse_type("(o+) -> o")}
    texts = [
        r"(\x+. or(x, y))(meet(y, y))",
        r"(\x+, z+. join(x, z))(y, not(not(y)))",
        r"(\g+. g(g(y)))(\x+. join(x, y))",
        r"(\x+. (\z+. meet(x, z))(x))(y)",
    ]
    for text in texts:
        term = parse_term(text)
        ty, _ = typecheck(term, sig.types, vts)
        norm = beta_normalize(term, reserved=set(sig.types))
        # renamed binders keep their declared types via the rename log
        log = {}
        norm = beta_normalize(term, reserved=set(sig.types), rename_log=log)
        norm_vts = dict(vts)
        for new, old in log.items():
            if old in vts:
                norm_vts[new] = vts[old]
        nty, _ = typecheck(norm, sig.types, norm_vts)
        assert nty == ty
        for y in (0, 1):
            a, _ = eval_global(term, sig, lat, vts, env={"y": y})
            b, _ = eval_global(norm, sig, lat, norm_vts, env={"y": y})
            assert canonical_value(a) == canonical_value(b)


def test_beta_normalize_avoids_capture():
    lat = boolean()
    sig = logic_sig()
    vts = {"x": GROUND, "y": GROUND, "g": parse_type("(o+, o+) -> o")}
    # substituting y under a binder named y must rename the binder
    term = parse_term(r"(\x+. \y+. meet(x, y))(y)")
    log = {}
    norm = beta_normalize(term, reserved=set(sig.types), rename_log=log)
    norm_vts = dict(vts)
    for new, old in log.items():
        if old in vts:
            norm_vts[new] = vts[old]
    for y in (0, 1):
        got, _ = eval_global(norm, sig, lat, norm_vts, env={"y": y}, args=[1])
        assert got == lat.meet(y, 1)


def test_global_rendering_of_table_results():
    lat = two()
    sig = logic_sig()
    vts = {"F": parse_type("(o+) -> o")}
    _, stats = eval_global(parse_term("mu F(x+). or(x, F(x))"), sig, lat, vts)
    assert stats.result == "{(0): 0; (1): 1}"


def test_stats_json_schema():
    lat = boolean()
    sig = logic_sig()
    _, stats = eval_local(parse_term("nu x. x"), sig, lat)
    payload = stats.to_json()
    assert set(payload) == {"mode", "result", "fixpoints", "duration_ms"}
    assert payload["mode"] == "local"
    assert payload["result"] == "top"
    assert payload["fixpoints"][0] == {
        "var": "x",
        "width": 1,
        "height": 2,
        "body_evals": 1,
    }
