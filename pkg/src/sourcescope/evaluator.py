"""Scoring of predicted mentions against gold annotations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from sourcescope._fmt import fmt2, pct
from sourcescope.extractor import Kind, SourceMention
from sourcescope.patterns import Platform

KIND_ORDER = (Kind.QUOTATION, Kind.PARAPHRASE, Kind.EMBEDDING)
KIND_LABELS = {Kind.QUOTATION: "Quotation", Kind.PARAPHRASE: "Paraphrase", Kind.EMBEDDING: "Embedding"}


@dataclass(frozen=True)
class GoldAnnotation:
    article_id: str
    sentence_index: int
    platform: Platform
    kind: Kind


@dataclass(frozen=True)
class ConfusionCounts:
    tp: dict  # Kind -> int
    fp: dict
    fn: dict

    @classmethod
    def zero(cls) -> "ConfusionCounts":
        return cls(
            tp={k: 0 for k in KIND_ORDER},
            fp={k: 0 for k in KIND_ORDER},
            fn={k: 0 for k in KIND_ORDER},
        )


@dataclass(frozen=True)
class MetricRow:
    precision: float  # percent
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    per_kind: dict  # Kind -> MetricRow
    macro: MetricRow
    micro: MetricRow


def load_gold(path) -> list[GoldAnnotation]:
    """Read gold annotations, one JSON object per line."""
    annotations: list[GoldAnnotation] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            annotations.append(
                GoldAnnotation(
                    article_id=obj["article_id"],
                    sentence_index=int(obj["sentence_index"]),
                    platform=Platform(obj["platform"]),
                    kind=Kind(obj["kind"]),
                )
            )
    return annotations


def _keyed(items, label: str) -> dict:
    keyed: dict = {}
    for item in items:
        key = (item.article_id, item.sentence_index, item.platform)
        if key in keyed:
            raise ValueError(f"duplicate {label} key {key}")
        keyed[key] = item.kind
    return keyed


def compare(predicted: Sequence[SourceMention], gold: Sequence[GoldAnnotation]) -> ConfusionCounts:
    """A prediction is a TP iff gold holds the same (article, sentence, platform, kind).

    Unmatched predictions are FPs of their predicted kind; unmatched golds
    are FNs of their gold kind.
    """
    pred_map = _keyed(predicted, "prediction")
    gold_map = _keyed(gold, "gold")
    counts = ConfusionCounts.zero()
    for key, kind in pred_map.items():
        if gold_map.get(key) == kind:
            counts.tp[kind] += 1
        else:
            counts.fp[kind] += 1
    for key, kind in gold_map.items():
        if pred_map.get(key) != kind:
            counts.fn[kind] += 1
    return counts


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def metrics(counts: ConfusionCounts) -> EvalReport:
    """Per-kind and macro/micro precision, recall, F1 as percentages.

    0/0 ratios are 0. Macro F1 is the harmonic mean of macro P and macro R;
    micro metrics pool counts across kinds.
    """
    per_kind: dict = {}
    for kind in KIND_ORDER:
        p = pct(counts.tp[kind], counts.tp[kind] + counts.fp[kind])
        r = pct(counts.tp[kind], counts.tp[kind] + counts.fn[kind])
        per_kind[kind] = MetricRow(p, r, _f1(p, r))

    macro_p = sum(row.precision for row in per_kind.values()) / len(KIND_ORDER)
    macro_r = sum(row.recall for row in per_kind.values()) / len(KIND_ORDER)
    macro = MetricRow(macro_p, macro_r, _f1(macro_p, macro_r))

    tp = sum(counts.tp.values())
    fp = sum(counts.fp.values())
    fn = sum(counts.fn.values())
    micro_p = pct(tp, tp + fp)
    micro_r = pct(tp, tp + fn)
    micro = MetricRow(micro_p, micro_r, _f1(micro_p, micro_r))

    return EvalReport(per_kind=per_kind, macro=macro, micro=micro)


# Previously reported results for this detector family. The Quotation and
# Paraphrase F1 cells are inconsistent with the harmonic mean of their own
# row's P/R and are exactly each other's values (a typesetting transposition).
REPORTED_RESULTS = {
    Kind.QUOTATION: MetricRow(89.80, 73.33, 86.21),
    Kind.PARAPHRASE: MetricRow(94.34, 79.37, 80.73),
    Kind.EMBEDDING: MetricRow(100.0, 100.0, 100.0),
}


def f1_transposition_note(report: EvalReport, tol: float = 0.01) -> Optional[str]:
    """A note when the computed F1s match the reported table with Quotation
    and Paraphrase swapped; None otherwise."""

    def close(a: float, b: float) -> bool:
        return abs(a - b) <= tol + 1e-9

    q = report.per_kind[Kind.QUOTATION]
    p = report.per_kind[Kind.PARAPHRASE]
    rq = REPORTED_RESULTS[Kind.QUOTATION]
    rp = REPORTED_RESULTS[Kind.PARAPHRASE]
    if not (close(q.precision, rq.precision) and close(q.recall, rq.recall)):
        return None
    if not (close(p.precision, rp.precision) and close(p.recall, rp.recall)):
        return None
    if close(q.f1, rq.f1) and close(p.f1, rp.f1):
        return None
    if close(q.f1, rp.f1) and close(p.f1, rq.f1):
        return (
            "note: recomputed Quotation/Paraphrase F1 values "
            f"({fmt2(q.f1)}, {fmt2(p.f1)}) match the reported table with the "
            "two cells transposed; the reported F1 cells are inconsistent "
            "with their own rows' P/R"
        )
    return None


def write_report_csv(report: EvalReport, path, note: Optional[str] = None) -> None:
    """CSV rows Quotation, Paraphrase, Embedding, Macro-average, Micro-average."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("category,precision,recall,f1\n")
        for kind in KIND_ORDER:
            row = report.per_kind[kind]
            fh.write(f"{KIND_LABELS[kind]},{fmt2(row.precision)},{fmt2(row.recall)},{fmt2(row.f1)}\n")
        fh.write(f"Macro-average,{fmt2(report.macro.precision)},{fmt2(report.macro.recall)},{fmt2(report.macro.f1)}\n")
        fh.write(f"Micro-average,{fmt2(report.micro.precision)},{fmt2(report.micro.recall)},{fmt2(report.micro.f1)}\n")
        if note:
            fh.write(f"# {note}\n")
