import csv
import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enviroclass.csvio import record_rows
from enviroclass.errors import SchemaError
from enviroclass.indices import POLLUTANTS, WATER_PARAMETERS
from enviroclass.ingest import (DEFAULT_AIR_COLUMNS, DEFAULT_WATER_COLUMNS, AirRecord, WaterRecord,
                                average_water_by_state, parse_air_csv, parse_water_csv, state_key)

AIR_HEADER = "state,location,so2,no2,rspm,spm\n"
WATER_HEADER = ",".join(f'"{c}"' if "," in c else c for c in DEFAULT_WATER_COLUMNS.values()) + "\n"


def air(text):
    return parse_air_csv((AIR_HEADER + text).encode())


def water(text):
    return parse_water_csv((WATER_HEADER + text).encode())


def test_header_only_air():
    records, report = air("")
    assert records == [] and report.rows_read == 0 and report.rows_dropped == 0


def test_empty_file():
    records, report = parse_air_csv(b"")
    assert records == [] and report.rows_read == 0


def test_blank_cell_is_absent():
    (rec,), report = air("A,loc,12.0,,,\n")
    assert rec.so2 == 12.0 and rec.no2 is None
    assert report.missing["no2"] == 1


def test_all_blank_row_dropped():
    records, report = air("A,loc,,,,\nB,loc,1,,,\n")
    assert [r.state for r in records] == ["B"]
    assert report.rows_dropped == 1 and report.rows_read == 2


def test_missing_column_is_schema_error():
    with pytest.raises(SchemaError, match="rspm"):
        parse_air_csv(b"state,location,so2,no2,spm\nA,l,1,2,3\n")


def test_negative_value_clamped_to_missing():
    (rec,), report = air("A,loc,-1,5,,\n")
    assert rec.so2 is None and rec.no2 == 5.0
    assert report.out_of_range["so2"] == 1 and report.missing["so2"] == 1


def test_water_two_fields_present():
    row = ",".join(["A", "loc", "", "7.2", "", "3.1", "", "", ""]) + "\n"
    (rec,), _ = water(row)
    assert rec.measurements() == {"ph": 7.2, "bod": 3.1}


def test_unparseable_cell_is_missing():
    row = ",".join(["A", "loc", "", "abc", "", "3.1", "", "", ""]) + "\n"
    (rec,), report = water(row)
    assert rec.ph is None and rec.bod == 3.1
    assert report.unparseable["ph"] == 1


def test_ph_out_of_range_is_missing():
    row = ",".join(["A", "loc", "", "15", "", "3.1", "", "", ""]) + "\n"
    (rec,), report = water(row)
    assert rec.ph is None and report.out_of_range["ph"] == 1


def test_quoted_fields_and_custom_mapping():
    text = 'region,site,s,n,r,p\n"Tamil  Nadu ","x, y",1,2,3,4\n'
    mapping = {"state": "region", "location": "site", "so2": "s", "no2": "n", "rspm": "r", "spm": "p"}
    (rec,), _ = parse_air_csv(text.encode(), mapping)
    assert rec.state == "Tamil Nadu" and rec.location == "x, y" and rec.spm == 4.0


def test_state_key_normalisation():
    assert state_key("  tamil   NADU ") == state_key("Tamil Nadu") == "tamil nadu"


def test_reads_from_path_and_stream(tmp_path):
    p = tmp_path / "air.csv"
    p.write_text(AIR_HEADER + "A,l,1,2,3,4\n", encoding="utf-8")
    assert parse_air_csv(p)[0] == parse_air_csv(io.BytesIO(p.read_bytes()))[0]


def test_average_two_records():
    out = average_water_by_state([WaterRecord("A", bod=2.0), WaterRecord("A", bod=4.0)])
    agg = out["a"]
    assert agg.bod == 3.0 and agg.sample_count == 2 and agg.ph is None


def test_average_single_record_identity():
    rec = WaterRecord("A", ph=7.1, bod=1.5)
    assert average_water_by_state([rec])["a"].measurements() == rec.measurements()


def test_average_per_parameter_denominator():
    recs = [WaterRecord("A", ph=8.0, bod=1.0), WaterRecord("A", bod=2.0), WaterRecord("A", bod=3.0)]
    agg = average_water_by_state(recs)["a"]
    assert agg.ph == 8.0 and agg.bod == 2.0 and agg.sample_count == 3


def test_average_empty():
    assert average_water_by_state([]) == {}


def test_states_merge_case_insensitively():
    out = average_water_by_state([WaterRecord("Goa", bod=1.0), WaterRecord("GOA", bod=3.0)])
    assert list(out) == ["goa"] and out["goa"].bod == 2.0


maybe = st.one_of(st.none(), st.floats(0, 1e6, allow_nan=False))
water_records = st.lists(
    st.builds(WaterRecord, state=st.sampled_from(["A", "B", "c"]),
              **{p: (st.one_of(st.none(), st.floats(0, 14)) if p == "ph" else maybe) for p in WATER_PARAMETERS}),
    min_size=1, max_size=12,
)


@given(water_records, st.randoms())
def test_average_permutation_invariant(records, rnd):
    shuffled = list(records)
    rnd.shuffle(shuffled)
    assert average_water_by_state(records) == average_water_by_state(shuffled)


@given(water_records)
def test_mean_within_min_max(records):
    for key, agg in average_water_by_state(records).items():
        for p in WATER_PARAMETERS:
            vals = [getattr(r, p) for r in records if r.key == key and getattr(r, p) is not None]
            if vals:
                assert min(vals) <= getattr(agg, p) <= max(vals)
            else:
                assert getattr(agg, p) is None


@given(st.lists(st.tuples(st.sampled_from(["A", " b ", ""]), *[maybe] * 4), max_size=15))
def test_report_conservation(rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(DEFAULT_AIR_COLUMNS.values())
    for state, *vals in rows:
        w.writerow([state, "l", *("" if v is None else repr(v) for v in vals)])
    _, report = parse_air_csv(buf.getvalue().encode())
    assert report.rows_read == report.rows_kept + report.rows_dropped == len(rows)


air_records = st.lists(
    st.builds(AirRecord, state=st.sampled_from(["Delhi", "Tamil Nadu", "Goa"]),
              location=st.text("abc ,\"xyz", max_size=8).map(str.strip), **{p: maybe for p in POLLUTANTS})
    .filter(lambda r: r.measurements()),
    max_size=10,
)


@settings(max_examples=50)
@given(air_records)
def test_air_round_trip(records):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(record_rows(records, DEFAULT_AIR_COLUMNS, POLLUTANTS))
    parsed, report = parse_air_csv(buf.getvalue().encode())
    assert parsed == records and report.rows_dropped == 0


def test_water_round_trip():
    rnd = random.Random(7)
    records = [WaterRecord("Kerala", f"s{i}", **{p: round(rnd.uniform(0, 14), 3) for p in WATER_PARAMETERS})
               for i in range(5)]
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(record_rows(records, DEFAULT_WATER_COLUMNS, WATER_PARAMETERS))
    assert parse_water_csv(buf.getvalue().encode())[0] == records
