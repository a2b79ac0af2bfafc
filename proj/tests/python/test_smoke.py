"""Smoke tests for the python module: one pass over every exposed operation."""

import pytest

import costsr

FLIP = "p bcnf 5 3 3\nb 3 4 5 0\n1 2 3 0\n-1 4 0\n-2 5 0\n"


def test_parse_and_cost():
    inst = costsr.parse_instance("p bcnf 3 2 1\nb 3 0\n1 3 0\n-1 3 0\n")
    assert inst.nvars == 3
    assert inst.num_clauses == 2
    assert inst.blocking == [3]
    report = costsr.brute_cost(inst)
    assert report["satisfiable"]
    assert report["cost"] == 1


def test_instance_roundtrip():
    inst = costsr.parse_instance(FLIP)
    assert costsr.print_instance(inst) == FLIP


def test_bphp_proof_checks():
    inst = costsr.gen_bphp(3, 2)
    proof = costsr.gen_bphp_proof(3, 2)
    verdict = costsr.check_proof(inst, proof)
    assert verdict["accepted"]
    assert verdict["bound"] == ("eq", 1)
    assert verdict["stats"]["steps"] > 0


def test_certify_and_export():
    inst = costsr.parse_instance(FLIP)
    proof = costsr.certify(inst)
    verdict = costsr.check_proof(inst, proof)
    assert verdict["accepted"]
    assert verdict["bound"] == ("eq", 1)
    script = costsr.export_veripb(inst, proof)
    assert script.startswith("pbp costsr 1")


def test_optimal_assignments():
    inst = costsr.parse_instance(FLIP)
    optima = costsr.optimal_assignments(inst)
    assert optima == [
        [0, 0, 1, 0, 0],
        [1, 0, 0, 1, 0],
        [0, 1, 0, 0, 1],
    ]


def test_rejected_proof_reports_the_step():
    inst = costsr.parse_instance(FLIP)
    verdict = costsr.check_proof(inst, "3 0 w 3 t 0 #lpr\n")
    assert not verdict["accepted"]
    assert verdict["failing_step"] == 1
    assert "cost condition" in verdict["reason"]


def test_msr_checker():
    inst = costsr.parse_instance("p bcnf 2 2 1\nb 2 0\n1 2 0\n-1 2 0\n")
    verdict = costsr.check_msr_proof(inst, "h 2 0\ns+ 2 0\nsm 2 0\nconclude bot 1\n")
    assert verdict["accepted"]
    assert verdict["bound"] == ("geq", 1)


def test_blockify_and_hamming():
    bcnf, mapping = costsr.blockify_wcnf("h 1 2 0\n1 -1 0\n1 2 0\n")
    assert mapping == [3, 4]
    inst = costsr.parse_instance(bcnf)
    assert inst.nvars == 4

    hamming = costsr.gen_hamming(2)
    assert costsr.brute_cost(hamming)["cost"] == 2


def test_rule_level_operations():
    inst = costsr.parse_instance(FLIP)
    # the unique single-flip witness for the unit b1 overshoots by one
    report = costsr.check_cost_condition(inst, [3], {3: True})
    assert not report["ok"]
    assert report["max_delta"] == 1
    assert costsr.classify_witness([3], {3: True}) == "lpr"
    kind, value = costsr.flip_degree(inst, [3], {3: True})
    assert kind == "exact" and value == 1
    # a literal image makes the witness a general substitution
    assert costsr.classify_witness([1, 2], {1: -2}) == "sr"


def test_format_errors_raise():
    with pytest.raises(costsr.FormatError):
        costsr.parse_instance("p bcnf 3 0 1\nb 4 0\n")
