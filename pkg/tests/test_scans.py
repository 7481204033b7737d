import pytest

from genlambda import scans
from genlambda.lambda_fn import LambdaSpec
from genlambda.modgroup import UniMat


def test_cyclotomic_suites_small():
    assert scans.unit_scan(15).passed
    assert scans.divisibility_scan(15).passed
    res = scans.nonvanishing_scan(7, 12)
    assert res.passed and res.checked > 0


def test_difference_suites_single_level():
    p1, p2 = scans.difference_scan([8])
    assert p1.passed and p2.passed
    assert p2.checked == 2 * p1.checked


def test_leading_case_rejects_equal_indices():
    with pytest.raises(ValueError):
        scans.check_leading_case(7, 1, 1, UniMat(1, 0, 0, 1))


def test_leading_case_single():
    assert scans.check_leading_case(12, 6, 3, UniMat(1, 0, 2, 1)) == (True, "")


def test_integrality_records_excluded_levels():
    res = scans.integrality_scan([9, 10], include_excluded=True)
    rows = {(r["N"], r["k"]): r for r in res.records}
    assert res.passed
    assert rows[(10, 3)]["case"] == "i" and rows[(10, 3)]["all_integral"]
    assert rows[(10, 4)]["case"] is None
    assert rows[(9, 3)]["case"] is None and not rows[(9, 3)]["all_integral"]


def test_lambda_specs():
    assert scans.lambda_specs([12]) == [LambdaSpec(5, 12)]
    assert scans.lambda_specs([12], qualifying_only=False) == [LambdaSpec(3, 12), LambdaSpec(4, 12),
                                                                LambdaSpec(5, 12)]


def test_distinctness_small():
    res = scans.distinctness_scan([7, 8])
    assert res.passed and res.checked == 48


def test_parallel_matches_serial():
    serial = scans.integrality_scan([8], jobs=1)
    parallel = scans.integrality_scan([8], jobs=2)
    assert serial.to_json() == parallel.to_json()


def test_result_json_caps_failures():
    res = scans.ScanResult("x", checked=10, failures=[{"i": i} for i in range(9)])
    data = res.to_json(max_failures=3)
    assert data["verdict"] == "FAIL" and data["failure_count"] == 9 and len(data["failures"]) == 3
