"""Independent oracle for parser_metrics.tsv: support-weighted F1 via scikit-learn.

Commands are aligned by position and flattened, one label per command.
Run: python3 parser_metrics.py parser_metrics.tsv
"""
import json
import re
import sys

from sklearn.metrics import f1_score

ARG = re.compile(r"'((?:[^'\\]|\\.)*)'|#\d+|[A-Z]+")


def commands(mr):
    out = []
    for cmd in mr.split(" ; "):
        inner = cmd.strip()[1:-1].strip()
        action, rest = inner.split(",", 1)
        out.append((action.strip(), rest.strip()))
    return out


def main(path):
    y_act_true, y_act_pred, y_tgt_true, y_tgt_pred = [], [], [], []
    exact = 0
    cases = 0
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip() or line.startswith("#"):
                continue
            _utt, gold, pred, _schema = line.rstrip("\n").split("\t")
            cases += 1
            exact += gold == pred
            g, p = commands(gold), commands(pred)
            assert len(g) == len(p), "oracle assumes aligned command counts"
            for (ga, gt), (pa, pt) in zip(g, p):
                y_act_true.append(ga)
                y_act_pred.append(pa)
                y_tgt_true.append(gt)
                y_tgt_pred.append(pt)
    result = {
        "cases": cases,
        "em_accuracy": round(100.0 * exact / cases, 6),
        "target_f1": round(100.0 * f1_score(y_tgt_true, y_tgt_pred, average="weighted"), 6),
        "action_f1": round(100.0 * f1_score(y_act_true, y_act_pred, average="weighted"), 6),
    }
    print(json.dumps(result, indent=2))


if __name__ == "__main__":
    main(sys.argv[1])
