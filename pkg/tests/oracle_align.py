"""Brute-force reference implementation of the speaker attribution rules.

Deliberately written from the documented behavior alone, with plain loops
and no code shared with the package: tests compare the real aligner
against this oracle, so any shortcut both sides inherited would defeat
the point. Operates on plain dicts and tuples.

Rules restated:

* A word takes the label of the turn it overlaps most. Equal overlaps go
  to the turn with the earliest start, then the smallest label.
* A word overlapping nothing takes the nearest turn's label when its
  boundary gap is within the tolerance, preferring earliest start then
  smallest label among equally distant turns; otherwise UNKNOWN.
* A segment takes the label owning the largest summed word duration.
  On a tie the earliest word carrying a tied label decides. A segment
  with no labeled words is treated as one pseudo-word over its own span.
"""

UNKNOWN = "UNKNOWN"


def overlap(a_start, a_end, b_start, b_end):
    lo = a_start if a_start > b_start else b_start
    hi = a_end if a_end < b_end else b_end
    if hi > lo:
        return hi - lo
    return 0.0


def gap(a_start, a_end, b_start, b_end):
    # zero when the intervals touch or intersect
    if b_start > a_end:
        return b_start - a_end
    if a_start > b_end:
        return a_start - b_end
    return 0.0


def label_interval(start, end, turns, tolerance):
    """Label one [start, end] span; turns are (start, end, label) tuples."""
    best = None
    for t_start, t_end, t_label in turns:
        width = overlap(start, end, t_start, t_end)
        if width <= 0.0:
            continue
        if best is None:
            best = (width, t_start, t_label)
            continue
        b_width, b_start, b_label = best
        if width > b_width:
            best = (width, t_start, t_label)
        elif width == b_width:
            if t_start < b_start or (t_start == b_start and t_label < b_label):
                best = (width, t_start, t_label)
    if best is not None:
        return best[2]

    nearest = None
    for t_start, t_end, t_label in turns:
        distance = gap(start, end, t_start, t_end)
        if nearest is None:
            nearest = (distance, t_start, t_label)
            continue
        n_distance, n_start, n_label = nearest
        if distance < n_distance:
            nearest = (distance, t_start, t_label)
        elif distance == n_distance:
            if t_start < n_start or (t_start == n_start and t_label < n_label):
                nearest = (distance, t_start, t_label)
    if nearest is not None and nearest[0] <= tolerance:
        return nearest[2]
    return UNKNOWN


def label_words(words, turns, tolerance):
    """words: (start, end) tuples -> list of labels."""
    return [label_interval(start, end, turns, tolerance) for start, end in words]


def label_segment(seg_start, seg_end, labeled_words, turns, tolerance):
    """labeled_words: (start, end, label) tuples for the segment's words."""
    totals = {}
    for w_start, w_end, w_label in labeled_words:
        if w_label != UNKNOWN:
            totals[w_label] = totals.get(w_label, 0.0) + (w_end - w_start)
    if not totals:
        return label_interval(seg_start, seg_end, turns, tolerance)

    top = max(totals.values())
    tied = {label for label, total in totals.items() if total == top}
    if len(tied) == 1:
        return tied.pop()
    ordered = sorted(labeled_words, key=lambda w: w[0])
    for _, _, w_label in ordered:
        if w_label in tied:
            return w_label
    return min(tied)
