"""Write a synthetic stand-in for the canada coordinate dataset.

Longitude/latitude pairs printed the way the original file prints them
(about 17 significant digits), one number per line.
"""

import random
import sys


def main(path="data/canada_synthetic.txt", count=111_126, seed=2021):
    rng = random.Random(seed)
    with open(path, "w") as fh:
        for i in range(count):
            if i % 2 == 0:
                v = round(rng.uniform(-141.0, -52.6), 6)
            else:
                v = round(rng.uniform(41.7, 83.1), 6)
            fh.write(f"{v:.15f}\n" if abs(v) < 100 else f"{v:.14f}\n")


if __name__ == "__main__":
    main(*sys.argv[1:2])
