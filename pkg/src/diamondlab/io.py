"""Canonical text formats for spaces, vectors, functions and transcripts.

Every writer emits a deterministic byte sequence for equal in-memory
values: entries are ordered by point index, fractions appear in lowest
terms with an explicit denominator, and files end with an ``end`` line.
Readers accept exactly what writers produce and raise
:class:`~diamondlab.errors.FormatError` with a line number otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .derivation import (AdversaryConfig, GameNode, GameTranscript, Move,
                         VerificationReport, WeakNeighborhood)
from .diamond import (DEFAULT_BUDGET, DiamondLandmarks, DiamondSpec,
                      build_cached, finest_edges)
from .decomposition import SummandPartition
from .errors import FormatError
from .freespace import FreeVector, TransportCertificate
from .lipschitz import LipschitzFunction
from .metric import MetricSpace
from .ordinal import format_ordinal, parse_ordinal

__all__ = [
    "format_fraction",
    "parse_fraction",
    "write_space",
    "read_space",
    "write_vector",
    "read_vector",
    "write_function",
    "read_function",
    "write_certificate",
    "read_certificate",
    "write_partition",
    "read_partition",
    "TranscriptDocument",
    "write_transcript",
    "read_transcript",
    "write_dot",
]

_FRACTION_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Exact rational from "p/q" or a plain integer; no floats."""
    if not _FRACTION_RE.match(text):
        raise FormatError(f"not an exact rational: {text!r}")
    return Fraction(text)


def _safe_label(label: str) -> str:
    if not label or any(ch.isspace() for ch in label):
        raise FormatError(f"label {label!r} is empty or contains whitespace")
    return label


class _Reader:
    """Token-line cursor with one-line lookahead and located errors."""

    def __init__(self, path: str):
        self.path = path
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read().split("\n")
        self.lines = [(n + 1, line) for n, line in enumerate(raw)
                      if line.strip()]
        self.pos = 0

    def error(self, message: str) -> FormatError:
        lineno = self.lines[self.pos - 1][0] if self.pos else 0
        return FormatError(f"{self.path}:{lineno}: {message}")

    def peek(self) -> Optional[list[str]]:
        if self.pos >= len(self.lines):
            return None
        return self.lines[self.pos][1].split()

    def next(self) -> list[str]:
        tokens = self.peek()
        if tokens is None:
            raise FormatError(f"{self.path}: unexpected end of file")
        self.pos += 1
        return tokens

    def expect(self, keyword: str) -> list[str]:
        tokens = self.next()
        if tokens[0] != keyword:
            raise self.error(f"expected {keyword!r}, found {tokens[0]!r}")
        return tokens

    def take(self, keyword: str) -> Optional[list[str]]:
        tokens = self.peek()
        if tokens and tokens[0] == keyword:
            self.pos += 1
            return tokens
        return None


def _write(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _header(kind: str) -> str:
    return f"diamondlab {kind} 1"


def _check_header(rd: _Reader, kind: str) -> None:
    tokens = rd.next()
    if tokens != ["diamondlab", kind, "1"]:
        raise rd.error(f"not a diamondlab {kind} file")


# ---------------------------------------------------------------------------
# spec echo lines


def _spec_line(spec: Optional[DiamondSpec]) -> str:
    if spec is None:
        return "spec none"
    return (f"spec alpha={format_ordinal(spec.alpha)} "
            f"branches={spec.branches} limit-width={spec.limit_width}")


def _parse_spec_tokens(rd: _Reader,
                       tokens: list[str]) -> Optional[DiamondSpec]:
    if tokens[1:] == ["none"]:
        return None
    fields = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise rd.error(f"malformed spec field {tok!r}")
        key, val = tok.split("=", 1)
        fields[key] = val
    try:
        return DiamondSpec(parse_ordinal(fields["alpha"]),
                           int(fields["branches"]),
                           int(fields["limit-width"]))
    except (KeyError, ValueError) as exc:
        raise rd.error(f"bad spec echo: {exc}")


def _space_line(space: MetricSpace, spec: Optional[DiamondSpec]) -> str:
    head = "space"
    if spec is not None:
        head += (f" alpha={format_ordinal(spec.alpha)}"
                 f" branches={spec.branches} limit-width={spec.limit_width}")
    return (f"{head} points={len(space)}"
            f" base={_safe_label(space.label(space.base_point))}")


def _check_space_line(rd: _Reader, space: MetricSpace) -> None:
    tokens = rd.expect("space")
    fields = dict(tok.split("=", 1) for tok in tokens[1:] if "=" in tok)
    if "points" in fields and int(fields["points"]) != len(space):
        raise rd.error(f"file was written for a {fields['points']}-point "
                       f"space, got {len(space)} points")
    if "base" in fields and fields["base"] != space.label(space.base_point):
        raise rd.error("file was written for a space with a different "
                       "base point")


def _index_of(rd: _Reader, space: MetricSpace, label: str) -> int:
    try:
        return space.index_of(label)
    except KeyError:
        raise rd.error(f"unknown point label {label!r}")


# ---------------------------------------------------------------------------
# spaces


def write_space(path: str, space: MetricSpace,
                landmarks: Optional[DiamondLandmarks] = None,
                spec: Optional[DiamondSpec] = None) -> None:
    lines = [_header("space"), _spec_line(spec), f"points {len(space)}",
             f"base {_safe_label(space.label(space.base_point))}"]
    for i in range(len(space)):
        lines.append(f"point {i} {_safe_label(space.label(i))}")
    if landmarks is not None:
        lines.append(f"landmark top {space.label(landmarks.top)}")
        lines.append(f"landmark bottom {space.label(landmarks.bottom)}")
        lines.append(f"landmark ell {space.label(landmarks.ell)}")
        for k, m in enumerate(landmarks.mids, start=1):
            lines.append(f"landmark mid {k} {space.label(m)}")
    for i in range(len(space)):
        for j in range(i + 1, len(space)):
            lines.append(f"dist {i} {j} "
                         f"{format_fraction(space.distance(i, j))}")
    lines.append("end")
    _write(path, lines)


def read_space(path: str, budget: int = DEFAULT_BUDGET
               ) -> tuple[MetricSpace, Optional[DiamondLandmarks],
                          Optional[DiamondSpec]]:
    """Load a space file; re-derive landmarks when a spec echo is present.

    With a spec echo the construction is rebuilt through the cache and
    checked against the stored labels and distances, so vectors written
    against the file bind to the shared space object.
    """
    rd = _Reader(path)
    _check_header(rd, "space")
    spec = _parse_spec_tokens(rd, rd.expect("spec"))
    count = int(rd.expect("points")[1])
    base_label = rd.expect("base")[1]
    labels = []
    for i in range(count):
        tokens = rd.expect("point")
        if int(tokens[1]) != i:
            raise rd.error("point lines out of order")
        labels.append(tokens[2])
    while rd.take("landmark"):
        pass
    dist = [[Fraction(0)] * count for _ in range(count)]
    for i in range(count):
        for j in range(i + 1, count):
            tokens = rd.expect("dist")
            if int(tokens[1]) != i or int(tokens[2]) != j:
                raise rd.error("dist lines out of order")
            dist[i][j] = dist[j][i] = parse_fraction(tokens[3])
    rd.expect("end")
    if base_label not in labels:
        raise rd.error(f"base label {base_label!r} is not a point")
    base = labels.index(base_label)
    if spec is None:
        return MetricSpace(labels, dist, base), None, None
    space, landmarks = build_cached(spec, budget)
    if list(space.labels) != labels or space.base_point != base:
        raise rd.error("stored points do not match the spec echo")
    for i in range(count):
        for j in range(i + 1, count):
            if space.distance(i, j) != dist[i][j]:
                raise rd.error(f"stored distance ({i},{j}) does not match "
                               f"the spec echo")
    return space, landmarks, spec


# ---------------------------------------------------------------------------
# vectors and functions


def write_vector(path: str, vec: FreeVector,
                 spec: Optional[DiamondSpec] = None) -> None:
    space = vec.space
    lines = [_header("vector"), _space_line(space, spec)]
    for i, c in vec.entries:
        lines.append(f"entry {_safe_label(space.label(i))} "
                     f"{format_fraction(c)}")
    lines.append("end")
    _write(path, lines)


def read_vector(path: str, space: MetricSpace) -> FreeVector:
    rd = _Reader(path)
    _check_header(rd, "vector")
    _check_space_line(rd, space)
    entries = []
    while (tokens := rd.take("entry")) is not None:
        entries.append((_index_of(rd, space, tokens[1]),
                        parse_fraction(tokens[2])))
    rd.expect("end")
    return FreeVector(space, entries)


def write_function(path: str, func: LipschitzFunction,
                   spec: Optional[DiamondSpec] = None) -> None:
    space = func.space
    lines = [_header("function"), _space_line(space, spec),
             "domain " + ("total" if func.is_total else "partial")]
    for i, v in func.entries:
        lines.append(f"value {_safe_label(space.label(i))} "
                     f"{format_fraction(v)}")
    lines.append("end")
    _write(path, lines)


def read_function(path: str, space: MetricSpace) -> LipschitzFunction:
    rd = _Reader(path)
    _check_header(rd, "function")
    _check_space_line(rd, space)
    marker = rd.expect("domain")[1]
    if marker not in ("total", "partial"):
        raise rd.error(f"unknown domain marker {marker!r}")
    values = []
    while (tokens := rd.take("value")) is not None:
        values.append((_index_of(rd, space, tokens[1]),
                       parse_fraction(tokens[2])))
    rd.expect("end")
    func = LipschitzFunction(space, values)
    if marker == "total" and not func.is_total:
        raise rd.error("file claims a total function but misses points")
    return func


def write_certificate(path: str, cert: TransportCertificate,
                      spec: Optional[DiamondSpec] = None) -> None:
    space = cert.vector.space
    lines = [_header("certificate"), _space_line(space, spec)]
    for i, c in cert.vector.entries:
        lines.append(f"entry {_safe_label(space.label(i))} "
                     f"{format_fraction(c)}")
    lines.append(f"value {format_fraction(cert.value)}")
    for i, j, mass in cert.plan:
        lines.append(f"plan {space.label(i)} {space.label(j)} "
                     f"{format_fraction(mass)}")
    for i, v in cert.potential.entries:
        lines.append(f"potential {space.label(i)} {format_fraction(v)}")
    lines.append("end")
    _write(path, lines)


def read_certificate(path: str, space: MetricSpace) -> TransportCertificate:
    rd = _Reader(path)
    _check_header(rd, "certificate")
    _check_space_line(rd, space)
    entries = []
    while (tokens := rd.take("entry")) is not None:
        entries.append((_index_of(rd, space, tokens[1]),
                        parse_fraction(tokens[2])))
    value = parse_fraction(rd.expect("value")[1])
    plan = []
    while (tokens := rd.take("plan")) is not None:
        plan.append((_index_of(rd, space, tokens[1]),
                     _index_of(rd, space, tokens[2]),
                     parse_fraction(tokens[3])))
    potential = []
    while (tokens := rd.take("potential")) is not None:
        potential.append((_index_of(rd, space, tokens[1]),
                          parse_fraction(tokens[2])))
    rd.expect("end")
    return TransportCertificate(FreeVector(space, entries), value,
                                tuple(plan),
                                LipschitzFunction(space, potential))


# ---------------------------------------------------------------------------
# partitions


def write_partition(path: str, space: MetricSpace,
                    partition: SummandPartition,
                    spec: Optional[DiamondSpec] = None) -> None:
    lines = [_header("partition"), _space_line(space, spec),
             f"base {_safe_label(space.label(partition.base))}"]
    for m, members in enumerate(partition.summands):
        labels = " ".join(_safe_label(space.label(i))
                          for i in sorted(members))
        lines.append(f"summand {m} {labels}".rstrip())
    lines.append("end")
    _write(path, lines)


def read_partition(path: str, space: MetricSpace) -> SummandPartition:
    rd = _Reader(path)
    _check_header(rd, "partition")
    _check_space_line(rd, space)
    base = _index_of(rd, space, rd.expect("base")[1])
    summands = []
    while (tokens := rd.take("summand")) is not None:
        if int(tokens[1]) != len(summands):
            raise rd.error("summand lines out of order")
        summands.append(tuple(_index_of(rd, space, lab)
                              for lab in tokens[2:]))
    rd.expect("end")
    return SummandPartition(base, tuple(summands))


# ---------------------------------------------------------------------------
# transcripts


@dataclass(frozen=True)
class TranscriptDocument:
    """A transcript plus the per-node verification statuses on record.

    ``statuses`` maps node paths to (status, condition) with status one
    of pass, fail or none; nodes missing from the map are written as
    none.  Built from a fresh game, or from a verification report via
    :meth:`with_report`.
    """

    transcript: GameTranscript
    statuses: dict[str, tuple[str, str]] = field(default_factory=dict)

    def with_report(self, report: VerificationReport) -> "TranscriptDocument":
        statuses = {e.path: ("pass" if e.ok else "fail", e.condition)
                    for e in report.entries}
        return TranscriptDocument(self.transcript, statuses)


def _walk_nodes(node: GameNode, path: str):
    yield path, node
    for k, move in enumerate(node.moves):
        yield from _walk_nodes(move.response_subtree, f"{path}.m{k}.r")
        yield from _walk_nodes(move.target_subtree, f"{path}.m{k}.t")


def write_transcript(path: str, doc: TranscriptDocument,
                     spec: Optional[DiamondSpec] = None) -> None:
    transcript = doc.transcript
    space = transcript.space
    lines = [_header("transcript"), _space_line(space, spec)]
    adv = transcript.adversary
    if adv is None:
        lines.append("adversary none")
    else:
        lines.append(f"adversary kind={adv.kind} count={adv.count} "
                     f"eta={format_fraction(adv.eta)} seed={adv.seed}")

    families: dict[tuple, int] = {}
    order: list[tuple[LipschitzFunction, ...]] = []
    for _, node in _walk_nodes(transcript.root, "root"):
        for move in node.moves:
            key = tuple(f.entries for f in move.neighborhood.functionals)
            if key not in families:
                families[key] = len(order)
                order.append(move.neighborhood.functionals)
    lines.append(f"families {len(order)}")
    for fid, fns in enumerate(order):
        lines.append(f"family {fid} size {len(fns)}")
        for k, fn in enumerate(fns):
            for i, v in fn.entries:
                lines.append(f"fvalue {fid} {k} {space.label(i)} "
                             f"{format_fraction(v)}")

    for node_path, node in _walk_nodes(transcript.root, "root"):
        lines.append(f"node {node_path} depth={node.depth} "
                     f"epsilon={format_fraction(node.epsilon)}")
        for i, c in node.target.entries:
            lines.append(f"tentry {node_path} {space.label(i)} "
                         f"{format_fraction(c)}")
        status, condition = doc.statuses.get(node_path, ("none", ""))
        lines.append(f"status {node_path} {status} {condition}".rstrip())
        for k, move in enumerate(node.moves):
            key = tuple(f.entries for f in move.neighborhood.functionals)
            lines.append(f"move {node_path} {k} family={families[key]} "
                         f"eta={format_fraction(move.neighborhood.eta)}")
            for i, c in move.response.entries:
                lines.append(f"rentry {node_path} {k} {space.label(i)} "
                             f"{format_fraction(c)}")
    lines.append("end")
    _write(path, lines)


def read_transcript(path: str, space: Optional[MetricSpace] = None,
                    landmarks: Optional[DiamondLandmarks] = None,
                    budget: int = DEFAULT_BUDGET
                    ) -> tuple[TranscriptDocument, MetricSpace,
                               Optional[DiamondLandmarks]]:
    """Load a transcript; rebuild its space from the echo when needed.

    Pass a space to bind the transcript to an existing object; without
    one, the file must carry a construction echo.
    """
    rd = _Reader(path)
    _check_header(rd, "transcript")
    tokens = rd.expect("space")
    fields = dict(tok.split("=", 1) for tok in tokens[1:] if "=" in tok)
    if space is None:
        if "alpha" not in fields:
            raise rd.error("transcript has no construction echo; a space "
                           "must be supplied")
        spec = DiamondSpec(parse_ordinal(fields["alpha"]),
                           int(fields["branches"]),
                           int(fields["limit-width"]))
        space, landmarks = build_cached(spec, budget)
    if "points" in fields and int(fields["points"]) != len(space):
        raise rd.error("transcript was written for a different space")
    if "base" in fields and fields["base"] != space.label(space.base_point):
        raise rd.error("transcript was written for a different base point")

    tokens = rd.expect("adversary")
    adversary = None
    if tokens[1:] != ["none"]:
        adv = dict(tok.split("=", 1) for tok in tokens[1:])
        adversary = AdversaryConfig(adv["kind"], int(adv["count"]),
                                    parse_fraction(adv["eta"]),
                                    int(adv["seed"]))

    family_count = int(rd.expect("families")[1])
    families: list[tuple[LipschitzFunction, ...]] = []
    for fid in range(family_count):
        tokens = rd.expect("family")
        if int(tokens[1]) != fid:
            raise rd.error("family lines out of order")
        size = int(tokens[3])
        values: list[list[tuple[int, Fraction]]] = [[] for _ in range(size)]
        while (tokens := rd.take("fvalue")) is not None:
            if int(tokens[1]) != fid:
                rd.pos -= 1
                break
            values[int(tokens[2])].append(
                (_index_of(rd, space, tokens[3]), parse_fraction(tokens[4])))
        families.append(tuple(LipschitzFunction(space, vals)
                              for vals in values))

    nodes: dict[str, dict] = {}
    order: list[str] = []
    statuses: dict[str, tuple[str, str]] = {}
    while (tokens := rd.peek()) is not None and tokens[0] != "end":
        tokens = rd.next()
        kind = tokens[0]
        if kind == "node":
            node_path = tokens[1]
            fields = dict(tok.split("=", 1) for tok in tokens[2:])
            nodes[node_path] = {"depth": int(fields["depth"]),
                                "epsilon": parse_fraction(fields["epsilon"]),
                                "target": [], "moves": {}}
            order.append(node_path)
        elif kind == "tentry":
            nodes[tokens[1]]["target"].append(
                (_index_of(rd, space, tokens[2]), parse_fraction(tokens[3])))
        elif kind == "status":
            statuses[tokens[1]] = (tokens[2],
                                   tokens[3] if len(tokens) > 3 else "")
        elif kind == "move":
            fields = dict(tok.split("=", 1) for tok in tokens[3:])
            nodes[tokens[1]]["moves"][int(tokens[2])] = {
                "family": int(fields["family"]),
                "eta": parse_fraction(fields["eta"]),
                "response": []}
        elif kind == "rentry":
            nodes[tokens[1]]["moves"][int(tokens[2])]["response"].append(
                (_index_of(rd, space, tokens[3]), parse_fraction(tokens[4])))
        else:
            raise rd.error(f"unexpected record {kind!r}")
    rd.expect("end")
    if "root" not in nodes:
        raise rd.error("transcript has no root node")

    def assemble(node_path: str) -> GameNode:
        rec = nodes[node_path]
        target = FreeVector(space, rec["target"])
        moves = []
        for k in sorted(rec["moves"]):
            mrec = rec["moves"][k]
            if mrec["family"] >= len(families):
                raise rd.error(f"move references unknown family "
                               f"{mrec['family']}")
            hood = WeakNeighborhood(families[mrec["family"]], target,
                                    mrec["eta"])
            response = FreeVector(space, mrec["response"])
            moves.append(Move(
                hood, response,
                assemble(f"{node_path}.m{k}.r"),
                assemble(f"{node_path}.m{k}.t")))
        return GameNode(target, rec["depth"], rec["epsilon"], tuple(moves))

    transcript = GameTranscript(space, assemble("root"), adversary)
    doc = TranscriptDocument(transcript, statuses)
    for node_path, _ in _walk_nodes(transcript.root, "root"):
        statuses.setdefault(node_path, ("none", ""))
    return doc, space, landmarks


# ---------------------------------------------------------------------------
# reports and plots


def write_dot(path: str, space: MetricSpace) -> None:
    """Graph of non-redundant edges with exact length labels."""
    lines = ["graph diamond {", "  node [shape=point];"]
    for i in range(len(space)):
        lines.append(f'  n{i} [xlabel="{space.label(i)}"];')
    for i, j in finest_edges(space):
        lines.append(f'  n{i} -- n{j} '
                     f'[label="{format_fraction(space.distance(i, j))}"];')
    lines.append("}")
    _write(path, lines)
