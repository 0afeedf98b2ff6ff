"""Per-criterion results collected by the acceptance tests."""

from collections import defaultdict

CRITERIA = {
    1: "type of every standard witness",
    2: "dual types, involution and double dual",
    3: "norm-group column of (SE)",
    4: "two-dimensional dual norms",
    5: "hole calculus against the bounded oracle",
    6: "Moebius invariance of holes",
    7: "line quotients of rank-1 witnesses",
    8: "decomposition of targeted presentations",
    9: "distance engine inside oracle brackets",
    10: "ball avoidance on orthogonal and control pairs",
    11: "strictness, HB and orthocomplements on XV_4",
}

RESULTS: dict = defaultdict(dict)


def record(criterion: int, key: str, ok: bool, note: str = "") -> None:
    RESULTS[criterion][key] = (bool(ok), note)


def summary_lines() -> list[str]:
    lines = []
    for n, title in CRITERIA.items():
        got = RESULTS.get(n)
        if not got:
            lines.append(f"criterion {n:2d} NOT RUN  {title}")
            continue
        good = sum(ok for ok, _ in got.values())
        notes = sorted({note for ok, note in got.values() if not ok and note})
        status = "PASS" if good == len(got) else "FAIL"
        extra = f" ({'; '.join(notes)})" if notes else ""
        lines.append(f"criterion {n:2d} {status}  {title}: {good}/{len(got)}{extra}")
    return lines
