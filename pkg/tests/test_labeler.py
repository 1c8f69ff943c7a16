from decimal import ROUND_HALF_UP, Decimal

import pytest

from enviroclass.indices import AirCategory as A
from enviroclass.indices import WaterCategory as W
from enviroclass.labeler import EnvLabel, build_label_table, combine, label_rank, rank_label

# The air=Good row and the same-name diagonal, as given for the labeler.
PINNED_CELLS = {
    (A.GOOD, W.EXCELLENT): EnvLabel.GOOD,  # 'Excellent' collapsed onto the best overall label
    (A.GOOD, W.GOOD): EnvLabel.GOOD,
    (A.GOOD, W.SATISFACTORY): EnvLabel.GOOD,
    (A.GOOD, W.POOR): EnvLabel.FAIR,
    (A.GOOD, W.SEVERE): EnvLabel.BAD,
    (A.SATISFACTORY, W.SATISFACTORY): EnvLabel.SATISFACTORY,
    (A.POOR, W.POOR): EnvLabel.POOR,
    (A.SEVERE, W.SEVERE): EnvLabel.SEVERE,
}


def oracle_fill(air, water):
    """Decimal re-derivation of the weighted fill rule."""
    score = Decimal("0.6") * int(air) + Decimal("0.4") * (1 + Decimal("1.25") * (int(water) - 1))
    rank = int(score.quantize(Decimal(1), rounding=ROUND_HALF_UP))
    return EnvLabel(min(max(rank, 1), 6))


def test_rank_mapping():
    assert [label_rank(l) for l in EnvLabel] == [1, 2, 3, 4, 5, 6]
    assert [l.label for l in EnvLabel] == ["Good", "Satisfactory", "Fair", "Poor", "Bad", "Severe"]
    for r in range(1, 7):
        assert label_rank(rank_label(r)) == r


def test_table_is_total():
    table = build_label_table()
    assert len(table) == 30
    assert {(c.air, c.water) for c in table} == {(a, w) for a in A for w in W}


@pytest.mark.parametrize("cell,label", PINNED_CELLS.items())
def test_pinned_cells(cell, label):
    assert combine(*cell) is label
    assert build_label_table().cells[cell].provenance == "pinned"


def test_derived_cells_match_oracle():
    for cell in build_label_table():
        if (cell.air, cell.water) in PINNED_CELLS:
            continue
        assert cell.provenance == "derived"
        assert cell.label is oracle_fill(cell.air, cell.water), (cell.air, cell.water)


def test_fill_examples():
    assert combine(A.SEVERE, W.EXCELLENT) is EnvLabel.POOR  # 3.6 + 0.4 = 4.0
    # 1.8 + 0.9 = 2.7 rounds to 3
    assert oracle_fill(A.MODERATE, W.GOOD) is EnvLabel.FAIR
    assert combine(A.MODERATE, W.GOOD) is EnvLabel.FAIR


def test_half_rounds_up():
    # (Good, Poor) scores exactly 2.5 and (Severe, Poor) 5.5; the unpinned one rounds up
    assert oracle_fill(A.SEVERE, W.POOR) is EnvLabel.SEVERE
    assert combine(A.SEVERE, W.POOR) is EnvLabel.SEVERE


def test_pin_overrides_formula():
    assert oracle_fill(A.GOOD, W.SEVERE) is EnvLabel.FAIR
    assert combine(A.GOOD, W.SEVERE) is EnvLabel.BAD


def test_air_dominance():
    for w in W:
        assert combine(A.SEVERE, w) >= combine(A.GOOD, w)


def test_monotonicity_violations_only_from_pins():
    violations = build_label_table().monotonicity_violations()
    assert violations, "the (Good, Severe) pin is expected to break column monotonicity"
    for better, worse in violations:
        assert "pinned" in (better.provenance, worse.provenance)
    pairs = {((b.air, b.water), (w.air, w.water)) for b, w in violations}
    assert ((A.GOOD, W.SEVERE), (A.SATISFACTORY, W.SEVERE)) in pairs


def test_table_is_deterministic():
    build_label_table.cache_clear()
    first = [(c.air, c.water, c.label, c.provenance) for c in build_label_table()]
    build_label_table.cache_clear()
    assert first == [(c.air, c.water, c.label, c.provenance) for c in build_label_table()]


def test_every_label_reachable():
    assert {c.label for c in build_label_table()} == set(EnvLabel)
