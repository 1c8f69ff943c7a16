"""Print the air x water label grid; pinned cells are marked with '*'."""
from enviroclass.indices import AirCategory, WaterCategory
from enviroclass.labeler import build_label_table


def main():
    table = build_label_table()
    width = 15
    print(" " * 14 + "".join(f"{w.label:>{width}s}" for w in WaterCategory))
    for a in AirCategory:
        cells = []
        for w in WaterCategory:
            cell = table.cells[a, w]
            mark = "*" if cell.provenance == "pinned" else " "
            cells.append(f"{cell.label.label + mark:>{width}s}")
        print(f"{a.label:14s}" + "".join(cells))
    violations = table.monotonicity_violations()
    print(f"\n* pinned cell; {len(violations)} monotonicity violation(s)")
    for here, nxt in violations:
        print(f"  ({here.air.label}, {here.water.label}) -> {here.label.label}"
              f"  but  ({nxt.air.label}, {nxt.water.label}) -> {nxt.label.label}")


if __name__ == "__main__":
    main()
