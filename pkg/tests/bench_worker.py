"""Run in a fresh interpreter: time compress() on n bytes of mixed text and report peak memory.

Usage: python bench_worker.py N REPEATS  -> prints one JSON object.
"""

import json
import resource
import statistics
import sys
import time

import psutil

from bolz.codec import compress
from bolz.experiments import mixed_text


def peak_rss() -> int:
    """High-water RSS of this process image in bytes.

    ru_maxrss survives execve on Linux, so a child of a large pytest process
    would report the parent's footprint; VmHWM starts fresh with the new image.
    """
    try:
        with open("/proc/self/status") as fh:
            for line in fh:
                if line.startswith("VmHWM:"):
                    return int(line.split()[1]) * 1024
    except OSError:
        pass
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def main() -> None:
    n, repeats = int(sys.argv[1]), int(sys.argv[2])
    data = mixed_text(n)
    compress(b"warm up the compiled kernels " * 4)
    baseline = psutil.Process().memory_info().rss
    times = []
    size = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        size = len(compress(data))
        times.append(time.perf_counter() - t0)
    peak = peak_rss()
    print(json.dumps({"n": n, "median": statistics.median(times), "times": times,
                      "baseline": baseline, "peak": peak, "compressed": size}))


if __name__ == "__main__":
    main()
