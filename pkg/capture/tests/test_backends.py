import numpy as np
import pytest

from posecapture.backends import (
    LANDMARK_NAMES,
    BackendUnavailableError,
    MarkerBackend,
    make_backend,
)


def marker_frame(left_px=(60, 100), right_px=(120, 100), size=(240, 320)):
    frame = np.zeros((*size, 3), np.uint8)
    lx, ly = left_px
    rx, ry = right_px
    frame[ly - 4:ly + 5, lx - 4:lx + 5] = (0, 0, 255)   # red block
    frame[ry - 4:ry + 5, rx - 4:rx + 5] = (0, 255, 0)   # green block
    return frame


class TestMarkerBackend:
    def test_detects_both_markers(self):
        backend = MarkerBackend()
        obs = backend.detect(marker_frame())
        assert [o.name for o in obs] == ["LEFT_SHOULDER", "RIGHT_SHOULDER"]
        left, right = obs
        assert left.x == pytest.approx(60 / 320)
        assert left.y == pytest.approx(100 / 240)
        assert right.x == pytest.approx(120 / 320)
        assert left.z == 0.0
        assert left.visibility == 1.0

    def test_empty_scene(self):
        backend = MarkerBackend()
        assert backend.detect(np.zeros((240, 320, 3), np.uint8)) == []

    def test_single_marker_is_no_detection(self):
        frame = np.zeros((240, 320, 3), np.uint8)
        frame[100:110, 60:70] = (0, 0, 255)  # red only
        assert MarkerBackend().detect(frame) == []

    def test_small_blob_below_area_threshold(self):
        frame = np.zeros((240, 320, 3), np.uint8)
        frame[100:102, 60:62] = (0, 0, 255)
        frame[100:102, 120:122] = (0, 255, 0)
        assert MarkerBackend(min_area_px=20).detect(frame) == []

    def test_normalized_coordinates_in_unit_square(self):
        obs = MarkerBackend().detect(marker_frame(left_px=(10, 10),
                                                  right_px=(310, 230)))
        for o in obs:
            assert 0.0 <= o.x <= 1.0
            assert 0.0 <= o.y <= 1.0


def test_topology_is_33_unique_upper_snake_names():
    assert len(LANDMARK_NAMES) == 33
    assert len(set(LANDMARK_NAMES)) == 33
    assert all(name == name.upper() for name in LANDMARK_NAMES)
    assert "LEFT_SHOULDER" in LANDMARK_NAMES


def test_make_backend_rejects_unknown():
    with pytest.raises(ValueError):
        make_backend("kinect")


def test_mediapipe_backend_unavailable_is_reported():
    # mediapipe is an optional extra; when absent the backend must fail
    # with the dedicated error, not an ImportError leaking to the caller
    try:
        import mediapipe  # noqa: F401
    except ImportError:
        with pytest.raises(BackendUnavailableError):
            make_backend("mediapipe")
    else:
        backend = make_backend("mediapipe")
        assert hasattr(backend, "detect")
