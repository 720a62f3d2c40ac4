"""Write the bundled demonstration models to models/ as JSON files."""

import json
from pathlib import Path

from mmsa.modelio import bn_to_dict, classifier_to_dict, tree_to_dict
from mmsa.presets import (
    five_atom_tree,
    naive_bayes_spec,
    staged_three_level_tree,
    ternary_complete_bn,
)

OUT = Path(__file__).resolve().parent.parent / "models"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    files = {
        "ternary_bn.json": bn_to_dict(ternary_complete_bn()),
        "five_atom_tree.json": tree_to_dict(five_atom_tree()),
        "staged_tree.json": tree_to_dict(staged_three_level_tree()),
        "naive_bayes.json": classifier_to_dict(naive_bayes_spec()),
    }
    for name, payload in files.items():
        path = OUT / name
        path.write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
