"""Regenerates data/sample_walk.avi, the checked-in 5-second test clip.

A subject wearing saturated shoulder markers (red = left, green = right)
enters from frame left after a second of empty scene, walks across while
turning, and exits. FFV1 keeps the file small and the decode lossless, so
the golden landmark file derived from it is reproducible byte for byte.
"""

import math
import pathlib

import cv2
import numpy as np

WIDTH, HEIGHT = 320, 240
FPS = 24.0
DURATION_S = 5.0
EMPTY_SECONDS = 1.0  # leading person-free frames exercise the no-pose path


def draw_disk(frame, cx, cy, radius, color_bgr):
    ys, xs = np.ogrid[:HEIGHT, :WIDTH]
    mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= radius ** 2
    frame[mask] = color_bgr


def subject_pose(t: float):
    """Marker centers at time t seconds; returns (left, right) pixel points."""
    walk_t = t - EMPTY_SECONDS
    progress = walk_t / (DURATION_S - EMPTY_SECONDS)
    cx = 40.0 + 240.0 * progress
    cy = 110.0 + 8.0 * math.sin(2.0 * math.pi * walk_t)  # gait bob
    # apparent shoulder separation shrinks as the subject turns away
    half = 28.0 * (1.0 - 0.5 * progress)
    return (cx - half, cy), (cx + half, cy)


def main():
    out_path = pathlib.Path(__file__).resolve().parent.parent / "data" / "sample_walk.avi"
    out_path.parent.mkdir(exist_ok=True)
    writer = cv2.VideoWriter(str(out_path), cv2.VideoWriter_fourcc(*"FFV1"),
                             FPS, (WIDTH, HEIGHT))
    if not writer.isOpened():
        raise SystemExit("FFV1 writer unavailable")
    n_frames = int(FPS * DURATION_S)
    for i in range(n_frames):
        t = i / FPS
        frame = np.full((HEIGHT, WIDTH, 3), 30, np.uint8)  # dim backdrop
        frame[200:, :] = (60, 60, 60)  # ground band
        if t >= EMPTY_SECONDS:
            left, right = subject_pose(t)
            # torso hint so the markers are not floating in space
            draw_disk(frame, (left[0] + right[0]) / 2, left[1] + 40, 18, (90, 90, 90))
            draw_disk(frame, left[0], left[1], 7, (0, 0, 255))    # red: left
            draw_disk(frame, right[0], right[1], 7, (0, 255, 0))  # green: right
        writer.write(frame)
    writer.release()
    print(f"wrote {n_frames} frames to {out_path}")


if __name__ == "__main__":
    main()
