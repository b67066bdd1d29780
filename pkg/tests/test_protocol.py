import json
import socket

import pytest

from spatialui import (
    Config,
    DeviceKind,
    Event,
    EventKind,
    FormatError,
    InputFrame,
    build_demo_world,
    tick,
)
from spatialui.protocol import (
    encode_line,
    event_record,
    frame_from_obj,
    frame_to_obj,
    parse_frame_line,
    snapshot_record,
)
from spatialui.server import serve, wait_for_port

CSV = "id,lat,lon,type,available,scan_path\nc0,0,0,rapid,1,\n"


class TestFrameCodec:
    def test_minimal_frame(self):
        frame = frame_from_obj({"t": 0.5})
        assert frame.timestamp == 0.5
        assert frame.devices == ()

    def test_full_frame_round_trip(self):
        obj = {
            "t": 1.25,
            "head": {"p": [0.0, 1.6, 0.0], "q": [0.0, 0.0, 0.0, 1.0]},
            "devices": [
                {"id": "right", "kind": "ray", "p": [0.1, 1.4, 0.0], "q": [0, 0, 0, 1], "pinch": 0.0, "trigger": 0.75},
                {"id": "left", "kind": "hand", "p": [-0.1, 1.4, 0.0], "q": [0, 0, 0, 1], "pinch": 0.9, "trigger": 0.0},
            ],
        }
        frame = frame_from_obj(obj)
        assert frame.devices[0].kind == DeviceKind.CONTROLLER_RAY
        assert frame.devices[0].trigger == 0.75
        assert frame.devices[1].kind == DeviceKind.TRACKED_HAND
        assert frame.devices[1].pinch_strength == 0.9
        again = frame_from_obj(frame_to_obj(frame))
        assert again == frame

    def test_rotation_normalized_on_parse(self):
        frame = frame_from_obj(
            {"t": 0.1, "devices": [{"id": "r", "kind": "ray", "p": [0, 0, 0], "q": [0, 0, 0, 2.0]}]}
        )
        assert frame.devices[0].pose.rotation.is_unit(1e-12)

    def test_bad_line_raises_format_error(self):
        with pytest.raises(FormatError):
            parse_frame_line("{bad json")
        with pytest.raises(FormatError):
            parse_frame_line('{"devices": []}')  # missing t
        with pytest.raises(FormatError):
            parse_frame_line('{"t": 0.1, "devices": [{"id": "x", "kind": "gamepad"}]}')


class TestRecords:
    def test_event_record_shape(self):
        ev = Event(EventKind.PRESSED, 7, 0.02, 1.5)
        assert event_record(ev) == {"ev": "Pressed", "node": 7, "t": 1.5}

    def test_value_changed_carries_value(self):
        ev = Event(EventKind.VALUE_CHANGED, 3, 2.25, 0.4)
        assert event_record(ev) == {"ev": "ValueChanged", "node": 3, "t": 0.4, "value": 2.25}

    def test_snapshot_record_covers_all_nodes(self):
        world, _ = build_demo_world(Config(), CSV)
        _, snap = tick(world, InputFrame(timestamp=1 / 90))
        record = snapshot_record(snap)
        assert record["snapshot"] == 1
        assert len(record["nodes"]) == len(world.scene.ids())
        kinds = {n["kind"] for n in record["nodes"]}
        assert "MapPlane" in kinds and "Button" in kinds
        for n in record["nodes"]:
            assert len(n["p"]) == 3 and len(n["q"]) == 4
            assert isinstance(n["visible"], bool)

    def test_encode_line_is_compact_jsonl(self):
        line = encode_line({"ev": "Pressed", "node": 1, "t": 0.5})
        assert line.endswith("\n") and ": " not in line


class TestSocketServer:
    def test_session_over_tcp(self):
        def factory():
            world, _ = build_demo_world(Config(), CSV)
            return world

        server = serve(factory, port=0)
        try:
            port = server.port
            assert wait_for_port(port)
            with socket.create_connection(("127.0.0.1", port), timeout=5) as sock:
                reader = sock.makefile("r", encoding="utf-8")
                sock.sendall(json.dumps({"t": 1 / 90, "devices": []}).encode() + b"\n")
                snap = json.loads(reader.readline())
                assert snap["snapshot"] == 1
                # second frame with a trigger press pointed at nothing
                sock.sendall(
                    json.dumps(
                        {"t": 2 / 90, "devices": [{"id": "r", "kind": "ray", "p": [5, 5, 5], "q": [0, 0, 0, 1], "trigger": 1.0}]}
                    ).encode()
                    + b"\n"
                )
                snap2 = json.loads(reader.readline())
                assert snap2["snapshot"] == 2
        finally:
            server.shutdown()

    def test_stale_frame_reports_protocol_error(self):
        def factory():
            world, _ = build_demo_world(Config(), CSV)
            return world

        server = serve(factory, port=0)
        try:
            port = server.port
            assert wait_for_port(port)
            with socket.create_connection(("127.0.0.1", port), timeout=5) as sock:
                reader = sock.makefile("r", encoding="utf-8")
                sock.sendall(b'{"t": 0.5, "devices": []}\n')
                reader.readline()
                sock.sendall(b'{"t": 0.4, "devices": []}\n')
                err = json.loads(reader.readline())
                assert err["code"] == 3
        finally:
            server.shutdown()
