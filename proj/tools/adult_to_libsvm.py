#!/usr/bin/env python3
"""Binarize the UCI Adult training split into a 123-feature LIBSVM file.

Layout follows the usual a1a..a9a encoding: every categorical attribute is
one-hot encoded, age / fnlwgt / education-num / hours-per-week are cut into
quintiles, and capital-gain / capital-loss into {zero, positive}. A missing
value ("?") produces no feature for that attribute. Label is +1 for ">50K".

usage: adult_to_libsvm.py adult.data out.txt[.gz]
"""

import gzip
import sys

import numpy as np

CATEGORIES = {
    "workclass": ["Private", "Self-emp-not-inc", "Self-emp-inc", "Federal-gov",
                  "Local-gov", "State-gov", "Without-pay", "Never-worked"],
    "education": ["Bachelors", "Some-college", "11th", "HS-grad", "Prof-school",
                  "Assoc-acdm", "Assoc-voc", "9th", "7th-8th", "12th", "Masters",
                  "1st-4th", "10th", "Doctorate", "5th-6th", "Preschool"],
    "marital-status": ["Married-civ-spouse", "Divorced", "Never-married",
                       "Separated", "Widowed", "Married-spouse-absent",
                       "Married-AF-spouse"],
    "occupation": ["Tech-support", "Craft-repair", "Other-service", "Sales",
                   "Exec-managerial", "Prof-specialty", "Handlers-cleaners",
                   "Machine-op-inspct", "Adm-clerical", "Farming-fishing",
                   "Transport-moving", "Priv-house-serv", "Protective-serv",
                   "Armed-Forces"],
    "relationship": ["Wife", "Own-child", "Husband", "Not-in-family",
                     "Other-relative", "Unmarried"],
    "race": ["White", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other",
             "Black"],
    "sex": ["Female", "Male"],
    "native-country": ["United-States", "Cambodia", "England", "Puerto-Rico",
                       "Canada", "Germany", "Outlying-US(Guam-USVI-etc)",
                       "India", "Japan", "Greece", "South", "China", "Cuba",
                       "Iran", "Honduras", "Philippines", "Italy", "Poland",
                       "Jamaica", "Vietnam", "Mexico", "Portugal", "Ireland",
                       "France", "Dominican-Republic", "Laos", "Ecuador",
                       "Taiwan", "Haiti", "Columbia", "Hungary", "Guatemala",
                       "Nicaragua", "Scotland", "Thailand", "Yugoslavia",
                       "El-Salvador", "Trinadad&Tobago", "Peru", "Hong",
                       "Holand-Netherlands"],
}

# (attribute, kind) in file column order.
COLUMNS = [
    ("age", "quintile"), ("workclass", "cat"), ("fnlwgt", "quintile"),
    ("education", "cat"), ("education-num", "quintile"),
    ("marital-status", "cat"), ("occupation", "cat"), ("relationship", "cat"),
    ("race", "cat"), ("sex", "cat"), ("capital-gain", "binary"),
    ("capital-loss", "binary"), ("hours-per-week", "quintile"),
    ("native-country", "cat"),
]


def main(src, dst):
    rows = []
    with open(src) as f:
        for line in f:
            parts = [p.strip() for p in line.strip().split(",")]
            if len(parts) == 15:
                rows.append(parts)

    cuts = {}
    for col, (name, kind) in enumerate(COLUMNS):
        if kind == "quintile":
            vals = np.array([float(r[col]) for r in rows])
            cuts[name] = np.unique(np.quantile(vals, [0.2, 0.4, 0.6, 0.8]))

    opener = gzip.open if dst.endswith(".gz") else open
    with opener(dst, "wt", newline="\n") as out:
        for r in rows:
            feats = []
            offset = 0
            for col, (name, kind) in enumerate(COLUMNS):
                v = r[col]
                if kind == "cat":
                    cats = CATEGORIES[name]
                    if v in cats:
                        feats.append(offset + cats.index(v) + 1)
                    offset += len(cats)
                elif kind == "quintile":
                    b = int(np.searchsorted(cuts[name], float(v), side="right"))
                    feats.append(offset + min(b, 4) + 1)
                    offset += 5
                else:
                    feats.append(offset + (1 if float(v) > 0 else 0) + 1)
                    offset += 2
            assert offset == 123
            label = "+1" if r[14].startswith(">50K") else "-1"
            out.write(label + "".join(f" {i}:1" for i in feats) + "\n")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
