"""
Tests for configuration checks, demand enumeration, alpha profiles and the
placement checker.
"""
import math
from fractions import Fraction

import pytest
from pydantic import ValidationError

from hetcache.core.exceptions import ConfigurationError, DomainError, EnumerationCapExceeded
from hetcache.schemas.system import Demand, FileId, FileKind, PlacementSpec, SystemConfig
from hetcache.services.scheme2 import place
from hetcache.services.system_model import (
    DemandClass,
    alpha_profile,
    check_placement,
    demand_class_size,
    demand_order_pairs,
    enumerate_demands,
    library_files,
    require_pair_cap,
    require_valid,
    validate_config,
    validate_demand,
)


class TestSystemConfig:
    def test_group_mapping_is_contiguous(self, desk_config):
        assert [desk_config.group_of(k) for k in desk_config.users] == [1, 1, 2, 2]
        assert desk_config.group_users(2) == (3, 4)
        assert desk_config.N == 8

    def test_valid_config_passes(self, desk_config):
        report = validate_config(desk_config)
        assert report.valid
        assert report.violations == []

    @pytest.mark.parametrize(
        "fields, message",
        [
            ({"K": 4, "G": 3, "Nc": 4, "Nu": 2, "M": 2}, "G must divide K"),
            ({"K": 4, "G": 2, "Nc": 3, "Nu": 2, "M": 2}, "N_c ≥ K violated"),
            ({"K": 4, "G": 2, "Nc": 4, "Nu": 1, "M": 2}, "N_u ≥ K/G violated"),
            ({"K": 4, "G": 2, "Nc": 4, "Nu": 2, "M": 6.5}, "M must lie in [0, N_c + N_u]"),
            ({"K": 4, "G": 2, "Nc": 4, "Nu": 2, "M": -1}, "M must lie in [0, N_c + N_u]"),
        ],
    )
    def test_violations_are_named(self, fields, message):
        report = validate_config(SystemConfig(**fields))
        assert not report.valid
        assert message in report.violations

    def test_require_valid_raises_with_report(self):
        with pytest.raises(ConfigurationError) as exc_info:
            require_valid(SystemConfig(K=4, G=3, Nc=3, Nu=2, M=2))
        assert exc_info.value.exit_code == 2
        assert "G must divide K" in exc_info.value.violations
        assert "N_c ≥ K violated" in exc_info.value.violations

    def test_config_is_immutable(self, desk_config):
        with pytest.raises(ValidationError):
            desk_config.K = 5

    def test_library_order(self, desk_config):
        labels = [f.label for f in library_files(desk_config)]
        assert labels == [
            "Wc[1]", "Wc[2]", "Wc[3]", "Wc[4]", "Wu1[1]", "Wu1[2]", "Wu2[1]", "Wu2[2]",
        ]


class TestFileIdAndDemand:
    def test_common_file_has_no_group(self):
        with pytest.raises(ValidationError):
            FileId(kind=FileKind.COMMON, index=1, group=1)
        with pytest.raises(ValidationError):
            FileId(kind=FileKind.UNIQUE, index=1)

    def test_distinct_files_required(self):
        with pytest.raises(ValidationError):
            Demand(requests=(FileId.common(1), FileId.common(1)))

    def test_from_pairs_resolves_groups(self, desk_config):
        d = Demand.from_pairs(desk_config, [(1, "u"), (1, "c"), (2, "c"), (1, "u")])
        assert d.file_of(1) == FileId.unique(1, 1)
        assert d.file_of(4) == FileId.unique(1, 2)
        assert d.unique_requesters == (1, 4)

    def test_from_pairs_accepts_kind_spellings(self, desk_config):
        short = Demand.from_pairs(desk_config, [(1, "u"), (1, "c"), (2, "c"), (2, "u")])
        long = Demand.from_pairs(desk_config, [(1, "unique"), (1, "common"), (2, "common"), (2, "unique")])
        enum = Demand.from_pairs(
            desk_config,
            [(1, FileKind.UNIQUE), (1, FileKind.COMMON), (2, FileKind.COMMON), (2, FileKind.UNIQUE)],
        )
        assert short == long == enum

    @pytest.mark.parametrize("kind", ["x", "C", "", "uniq"])
    def test_from_pairs_rejects_unknown_kind(self, desk_config, kind):
        with pytest.raises(DomainError) as exc_info:
            Demand.from_pairs(desk_config, [(1, "c"), (1, kind), (2, "c"), (3, "c")])
        assert exc_info.value.context["user"] == 2

    def test_validate_demand_rejects_foreign_group(self, desk_config):
        d = Demand(requests=(FileId.unique(1, 2), FileId.common(1), FileId.common(2), FileId.common(3)))
        with pytest.raises(DomainError):
            validate_demand(d, desk_config)

    def test_validate_demand_rejects_index_out_of_range(self, desk_config):
        d = Demand(requests=(FileId.common(5), FileId.common(1), FileId.common(2), FileId.common(3)))
        with pytest.raises(DomainError):
            validate_demand(d, desk_config)

    def test_records(self, desk_config):
        d = Demand.from_pairs(desk_config, [(1, "u"), (1, "c"), (2, "c"), (1, "u")])
        assert d.to_records()[0] == {"user": 1, "kind": "unique", "index": 1}


class TestDemandEnumeration:
    def test_common_only_single_group(self, single_group_config):
        assert len(enumerate_demands(single_group_config, DemandClass.COMMON_ONLY)) == 2

    def test_unique_only_two_groups(self, two_group_config):
        assert len(enumerate_demands(two_group_config, DemandClass.UNIQUE_ONLY)) == 1

    def test_all_two_groups(self, two_group_config):
        demands = enumerate_demands(two_group_config, DemandClass.ALL)
        assert len(demands) == 7
        assert demand_class_size(two_group_config, DemandClass.ALL) == 7

    def test_class_cardinalities(self, desk_config):
        K, L = desk_config.K, desk_config.users_per_group
        common = enumerate_demands(desk_config, DemandClass.COMMON_ONLY)
        unique = enumerate_demands(desk_config, DemandClass.UNIQUE_ONLY)
        assert len(common) == math.comb(desk_config.Nc, K) * math.factorial(K) == 24
        assert len(unique) == (math.comb(desk_config.Nu, L) * math.factorial(L)) ** desk_config.G == 4

    @pytest.mark.parametrize(
        "fields",
        [
            {"K": 4, "G": 2, "Nc": 4, "Nu": 2, "M": 2},
            {"K": 2, "G": 1, "Nc": 2, "Nu": 2, "M": 1},
            {"K": 3, "G": 3, "Nc": 4, "Nu": 2, "M": 1},
            {"K": 4, "G": 1, "Nc": 5, "Nu": 4, "M": 1},
        ],
    )
    def test_size_formula_matches_enumeration(self, fields):
        cfg = SystemConfig(**fields)
        for demand_class in DemandClass:
            assert demand_class_size(cfg, demand_class) == len(enumerate_demands(cfg, demand_class))

    def test_desk_instance_has_524_demands(self, desk_config):
        assert demand_class_size(desk_config) == 524

    def test_classes_are_disjoint_subsets(self, desk_config):
        everything = set(enumerate_demands(desk_config, DemandClass.ALL))
        common = set(enumerate_demands(desk_config, DemandClass.COMMON_ONLY))
        unique = set(enumerate_demands(desk_config, DemandClass.UNIQUE_ONLY))
        assert common | unique <= everything
        assert not common & unique

    def test_every_demand_requests_distinct_files(self, desk_config):
        for d in enumerate_demands(desk_config):
            assert len(set(d.requests)) == len(d.requests)

    def test_enumeration_order_is_lexicographic(self, single_group_config):
        demands = enumerate_demands(single_group_config, DemandClass.ALL)
        keys = [tuple(f.sort_key for f in d.requests) for d in demands]
        assert keys == sorted(keys)

    def test_cap_exceeded_reports_cardinality(self, desk_config):
        with pytest.raises(EnumerationCapExceeded) as exc_info:
            enumerate_demands(desk_config, DemandClass.ALL, cap=100)
        assert exc_info.value.cardinality == 524
        assert exc_info.value.cap == 100

    def test_demand_order_pairs(self, desk_config):
        assert demand_order_pairs(desk_config) == 524 * 24
        assert demand_order_pairs(desk_config, DemandClass.COMMON_ONLY) == 24 * 24
        assert demand_order_pairs(desk_config, DemandClass.UNIQUE_ONLY) == 4 * 24

    def test_pair_cap_bounds_permutations_too(self, desk_config):
        assert require_pair_cap(desk_config, DemandClass.ALL, cap=524 * 24) == 524 * 24
        # D fits a cap of 1000 on its own, D x S_K does not
        enumerate_demands(desk_config, DemandClass.ALL, cap=1000)
        with pytest.raises(EnumerationCapExceeded) as exc_info:
            require_pair_cap(desk_config, DemandClass.ALL, cap=1000)
        assert exc_info.value.cardinality == 524 * 24
        assert exc_info.value.cap == 1000


class TestAlphaProfile:
    def test_all_common(self, desk_config):
        d = Demand.from_pairs(desk_config, [(1, "c"), (2, "c"), (3, "c"), (4, "c")])
        assert alpha_profile(d, desk_config) == (0, 0)

    def test_all_unique(self, desk_config):
        d = Demand.from_pairs(desk_config, [(1, "u"), (2, "u"), (1, "u"), (2, "u")])
        assert alpha_profile(d, desk_config) == (2, 2)

    def test_mixed(self, desk_config):
        d = Demand.from_pairs(desk_config, [(1, "u"), (1, "c"), (2, "c"), (1, "u")])
        assert alpha_profile(d, desk_config) == (1, 1)


class TestPlacementChecker:
    def test_generated_placement_is_valid(self, desk_placement, desk_config):
        assert check_placement(desk_placement, desk_config).valid

    def test_dropped_subfile_breaks_partition(self, desk_placement, desk_config):
        key = next(iter(desk_placement.sizes))
        report = check_placement(desk_placement.without(key), desk_config)
        assert not report.valid
        assert report.violations[0].startswith("partition violated for")

    def test_memory_overflow_is_reported(self):
        cfg = SystemConfig(K=2, G=1, Nc=2, Nu=2, M=1)
        sizes = {(f, 0b11): Fraction(1) for f in library_files(cfg)}
        report = check_placement(PlacementSpec(config=cfg, sizes=sizes), cfg)
        assert not report.valid
        assert any(v.startswith("memory violated for user 1") for v in report.violations)

    def test_payload_length_mismatch(self, desk_config, desk_library):
        placement = place(desk_config, 0.5, desk_library)
        key = next(iter(placement.payloads))
        payloads = dict(placement.payloads)
        payloads[key] = payloads[key][:-1]
        broken = PlacementSpec(config=desk_config, sizes=placement.sizes, payloads=payloads)
        assert not check_placement(broken, desk_config).valid
