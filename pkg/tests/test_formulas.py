from fractions import Fraction as Fr

import pytest

from ringkit import formulas
from ringkit.treepair import from_plmap, generator, to_plmap


def nadic_points(n, depth=3):
    return sorted({Fr(a, n ** depth) for a in range(n ** depth + 1)})


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_formulas_match_tree_pairs(n):
    names = [("x", i) for i in range(1, n + 1)] + [("y", None), ("g1", None)]
    if n >= 3:
        names.append(("g2", None))
    for name, i in names:
        circle = name == "y"
        ref = formulas.formula(name, n, i)
        f = to_plmap(generator(name, n, i))
        assert formulas.build(ref, circle) == f
        assert formulas.discrepancies(ref, f, nadic_points(n), circle) == []
        assert from_plmap(formulas.build(ref, circle), n) == generator(name, n, i)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_printed_x_is_discontinuous(n):
    for i in range(1, n):
        with pytest.raises(formulas.FormulaInconsistency, match="discontinuity"):
            formulas.build(formulas.x_printed(n, i))
        bad = formulas.discrepancies(formulas.x_printed(n, i), to_plmap(generator("x", n, i)), nadic_points(n))
        assert bad


def test_g2_needs_three():
    with pytest.raises(formulas.FormulaInconsistency, match="reversed"):
        formulas.build(formulas.g2(2))
    with pytest.raises(ValueError):
        generator("g2", 2)


def test_evaluate_values():
    assert formulas.evaluate(formulas.y(3), 0, circle=True) == Fr(2, 3)
    assert formulas.evaluate(formulas.x(3, 1), Fr(1, 3)) == Fr(7, 9)
