import math
import random

import pytest

from spatialui import (
    ChargerQuery,
    ChargerRecord,
    ChargerType,
    FormatError,
    MapPlaneSpec,
    OutOfDomainError,
    TruncatedFileError,
    UnsupportedFormatError,
    load_chargers,
    load_point_cloud,
    mercator_project,
    mercator_unproject,
    query_chargers,
)
from spatialui.geo import MAX_LATITUDE

SPEC = MapPlaneSpec(extent=2.0, scale=1.0)


class TestMercatorProject:
    def test_origin_maps_to_center(self):
        assert mercator_project(0.0, 0.0, SPEC) == (0.0, 0.0)

    def test_longitude_is_linear(self):
        eps = 1e-6
        x, _ = mercator_project(0.0, 180.0 - eps, SPEC)
        assert x == pytest.approx(1.0 * (1.0 - eps / 180.0), rel=1e-12)

    def test_survey_point_matches_direct_formula(self):
        lat, lon = 57.1497, -2.0943
        x, y = mercator_project(lat, lon, SPEC)
        want_y = math.log(math.tan(math.pi / 4.0 + math.radians(lat) / 2.0)) / math.pi
        want_x = lon / 180.0
        assert abs(y - want_y) < 1e-12
        assert abs(x - want_x) < 1e-12

    def test_out_of_domain_latitude_rejected(self):
        with pytest.raises(OutOfDomainError):
            mercator_project(85.06, 0.0, SPEC)
        with pytest.raises(OutOfDomainError):
            mercator_project(-91.0, 0.0, SPEC)

    def test_scale_multiplies_uniformly(self):
        rng = random.Random(8)
        for _ in range(100):
            lat = rng.uniform(-80, 80)
            lon = rng.uniform(-180, 179.9)
            s = rng.uniform(0.1, 5.0)
            x1, y1 = mercator_project(lat, lon, MapPlaneSpec(extent=2.0, scale=1.0))
            xs, ys = mercator_project(lat, lon, MapPlaneSpec(extent=2.0, scale=s))
            assert xs == pytest.approx(s * x1, rel=1e-12, abs=1e-15)
            assert ys == pytest.approx(s * y1, rel=1e-12, abs=1e-15)

    def test_monotone_in_latitude_and_longitude(self):
        lats = [-85.0, -60.0, -20.0, 0.0, 15.0, 45.0, 70.0, 85.0]
        ys = [mercator_project(lat, 0.0, SPEC)[1] for lat in lats]
        assert ys == sorted(ys) and len(set(ys)) == len(ys)
        lons = [-180.0, -90.5, -1.0, 0.0, 2.5, 90.0, 179.5]
        xs = [mercator_project(0.0, lon, SPEC)[0] for lon in lons]
        assert xs == sorted(xs) and len(set(xs)) == len(xs)


class TestMercatorUnproject:
    def test_center_maps_to_origin(self):
        assert mercator_unproject(0.0, 0.0, SPEC) == (0.0, 0.0)

    def test_round_trip_thousand_points(self):
        rng = random.Random(123)
        for _ in range(1000):
            lat = rng.uniform(-MAX_LATITUDE, MAX_LATITUDE)
            lon = rng.uniform(-180.0, 180.0)
            x, y = mercator_project(lat, lon, SPEC)
            lat2, lon2 = mercator_unproject(x, y, SPEC)
            assert abs(lat2 - lat) < 1e-9
            assert abs(lon2 - lon) < 1e-9

    def test_plane_round_trip(self):
        rng = random.Random(321)
        spec = MapPlaneSpec(extent=3.0, scale=0.7)
        for _ in range(500):
            x = rng.uniform(-1.05, 1.05)
            y = rng.uniform(-1.05, 1.05)
            lat, lon = mercator_unproject(x, y, spec)
            x2, y2 = mercator_project(lat, lon, spec)
            assert abs(x2 - x) < 1e-9
            assert abs(y2 - y) < 1e-9

    def test_extent_boundary_is_mercator_limit(self):
        lat, _ = mercator_unproject(0.0, 1.0, SPEC)  # v = 1 edge of the plane
        assert lat == pytest.approx(85.05113, abs=1e-4)

    def test_outside_extent_rejected(self):
        with pytest.raises(OutOfDomainError):
            mercator_unproject(1.2, 0.0, SPEC)


def fixture_records(n: int = 200, seed: int = 55) -> list[ChargerRecord]:
    rng = random.Random(seed)
    types = list(ChargerType)
    return [
        ChargerRecord(
            id=f"c{i:03d}",
            latitude=rng.uniform(-80, 80),
            longitude=rng.uniform(-179, 179),
            charger_type=rng.choice(types),
            available=rng.random() < 0.5,
        )
        for i in range(n)
    ]


class TestQueryChargers:
    def test_empty_dataset(self):
        assert query_chargers([], ChargerQuery()) == []

    def test_identity_filter_returns_everything(self):
        records = fixture_records(20)
        assert query_chargers(records, ChargerQuery()) == records

    def test_all_sixteen_combinations_match_linear_scan(self):
        records = fixture_records(200)
        type_subsets = [
            frozenset(s)
            for s in (
                (),
                (ChargerType.SLOW,),
                (ChargerType.FAST,),
                (ChargerType.RAPID,),
                (ChargerType.SLOW, ChargerType.FAST),
                (ChargerType.SLOW, ChargerType.RAPID),
                (ChargerType.FAST, ChargerType.RAPID),
                (ChargerType.SLOW, ChargerType.FAST, ChargerType.RAPID),
            )
        ]
        for types in type_subsets:
            for available_only in (False, True):
                query = ChargerQuery(types=types, available_only=available_only)
                got = query_chargers(records, query)
                want = []
                for r in records:  # independent linear scan
                    type_ok = (not types) or (r.charger_type in types)
                    avail_ok = (not available_only) or r.available
                    if type_ok and avail_ok:
                        want.append(r)
                assert got == want

    def test_result_is_subsequence_of_input(self):
        records = fixture_records(60, seed=77)
        got = query_chargers(records, ChargerQuery(types=frozenset({ChargerType.RAPID})))
        it = iter(records)
        assert all(any(r is x for x in it) for r in got)


CSV_HEADER = "id,lat,lon,type,available,scan_path\n"


class TestLoadChargers:
    def test_header_only(self):
        records, errors = load_chargers(CSV_HEADER)
        assert records == [] and errors == []

    def test_single_valid_row(self):
        records, errors = load_chargers(CSV_HEADER + "a1,57.15,-2.09,rapid,true,\n")
        assert errors == []
        assert len(records) == 1
        r = records[0]
        assert r.id == "a1" and r.charger_type == ChargerType.RAPID and r.available
        assert r.scan_path is None

    def test_bad_latitude_cites_line_and_rule(self):
        text = CSV_HEADER + "a1,10,10,slow,1,\n" + "a2,91,0,fast,0,\n"
        records, errors = load_chargers(text)
        assert [r.id for r in records] == ["a1"]
        assert len(errors) == 1
        assert errors[0].line == 3
        assert "85.05113" in errors[0].message

    def test_missing_header_is_whole_file_error(self):
        with pytest.raises(FormatError):
            load_chargers("a1,57,2,slow,1,\n")
        with pytest.raises(FormatError):
            load_chargers("")

    def test_case_insensitive_type_and_numeric_bool(self):
        text = CSV_HEADER + "a1,0,0,RAPID,1,\n" + "a2,0,1,Fast,0,\n"
        records, errors = load_chargers(text)
        assert errors == []
        assert records[0].charger_type == ChargerType.RAPID and records[0].available
        assert records[1].charger_type == ChargerType.FAST and not records[1].available

    def test_duplicate_ids_rejected(self):
        text = CSV_HEADER + "a1,0,0,slow,1,\n" + "a1,0,1,slow,1,\n"
        records, errors = load_chargers(text)
        assert len(records) == 1 and len(errors) == 1
        assert "duplicate" in errors[0].message

    def test_unknown_type_and_bad_bool_collected(self):
        text = CSV_HEADER + "a1,0,0,turbo,1,\n" + "a2,0,0,slow,maybe,\n"
        records, errors = load_chargers(text)
        assert records == []
        assert [e.line for e in errors] == [2, 3]

    def test_scan_path_kept(self):
        records, _ = load_chargers(CSV_HEADER + "a1,0,0,slow,1,scans/site_a.ply\n")
        assert records[0].scan_path == "scans/site_a.ply"


def make_ply(points: list[tuple[float, float, float]], colors=None) -> str:
    lines = ["ply", "format ascii 1.0", f"element vertex {len(points)}"]
    lines += ["property float x", "property float y", "property float z"]
    if colors is not None:
        lines += ["property uchar red", "property uchar green", "property uchar blue"]
    lines.append("end_header")
    for i, (x, y, z) in enumerate(points):
        row = f"{x} {y} {z}"
        if colors is not None:
            row += " {} {} {}".format(*colors[i])
        lines.append(row)
    return "\n".join(lines) + "\n"


class TestLoadPointCloud:
    def test_single_white_vertex(self):
        cloud = load_point_cloud(make_ply([(0.0, 0.0, 0.0)]))
        assert len(cloud) == 1
        pos, color = cloud.points[0]
        assert (pos.x, pos.y, pos.z) == (0.0, 0.0, 0.0)
        assert color == (255, 255, 255)

    def test_declared_count_must_match(self):
        text = make_ply([(0, 0, 0)] * 10)
        truncated = "\n".join(text.splitlines()[:-1]) + "\n"  # drop one data row
        with pytest.raises(TruncatedFileError):
            load_point_cloud(truncated)

    def test_binary_ply_unsupported(self):
        text = make_ply([(0, 0, 0)]).replace("format ascii 1.0", "format binary_little_endian 1.0")
        with pytest.raises(UnsupportedFormatError):
            load_point_cloud(text)

    def test_generated_cloud_round_trips_exactly(self):
        rng = random.Random(404)
        pts = [
            (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(1000)
        ]
        colors = [
            (rng.randrange(256), rng.randrange(256), rng.randrange(256)) for _ in range(1000)
        ]
        cloud = load_point_cloud(make_ply(pts, colors))
        assert len(cloud) == 1000
        for (pos, color), want_pt, want_col in zip(cloud.points, pts, colors):
            assert (pos.x, pos.y, pos.z) == tuple(float(repr(v) and v) for v in want_pt)
            assert color == want_col

    def test_zero_vertices_rejected(self):
        with pytest.raises(FormatError):
            load_point_cloud(make_ply([]))

    def test_missing_magic_rejected(self):
        with pytest.raises(FormatError):
            load_point_cloud("format ascii 1.0\nend_header\n")

    def test_extra_elements_after_vertices_ignored(self):
        text = (
            "ply\nformat ascii 1.0\nelement vertex 2\n"
            "property float x\nproperty float y\nproperty float z\n"
            "element face 1\nproperty list uchar int vertex_indices\n"
            "end_header\n0 0 0\n1 1 1\n3 0 1 0\n"
        )
        cloud = load_point_cloud(text)
        assert len(cloud) == 2
