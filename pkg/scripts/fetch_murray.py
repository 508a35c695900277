"""Export the Murray smelter site data to tests/data/murray.csv.

The data ship with the R package SpatialPack on CRAN.  This script downloads
the source tarball, reads ``data/murray.rda`` with the ``rdata`` package and
writes the points CSV (s1, s2, x, y) with x = arsenic and y = lead.

    pip install rdata
    python scripts/fetch_murray.py [--tarball PATH] [--out PATH]
"""

import argparse
import io
import sys
import tarfile
import urllib.request
from pathlib import Path

CRAN = "https://cran.r-project.org/src/contrib/"
ARCHIVE = CRAN + "Archive/SpatialPack/"
DEFAULT_OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "murray.csv"


def _download():
    try:
        with urllib.request.urlopen(CRAN + "PACKAGES", timeout=60) as resp:
            index = resp.read().decode()
    except OSError as exc:
        raise SystemExit(f"cannot reach CRAN ({exc}); pass --tarball with a local copy") from None
    version = None
    for block in index.split("\n\n"):
        if block.startswith("Package: SpatialPack\n"):
            version = next(line.split(": ", 1)[1] for line in block.splitlines() if line.startswith("Version:"))
    if version is None:
        raise SystemExit("SpatialPack not listed on CRAN")
    name = f"SpatialPack_{version}.tar.gz"
    for base in (CRAN, ARCHIVE):
        try:
            with urllib.request.urlopen(base + name, timeout=120) as resp:
                return resp.read()
        except OSError:
            continue
    raise SystemExit(f"could not download {name}")


def _read_rda(raw):
    import rdata

    if hasattr(rdata, "read_rda"):
        return rdata.read_rda(io.BytesIO(raw))
    return rdata.conversion.convert(rdata.parser.parse_data(raw))


def _column(frame, *names):
    lower = {str(c).lower(): c for c in frame.columns}
    for name in names:
        if name.lower() in lower:
            return frame[lower[name.lower()]].to_numpy(dtype=float)
    raise KeyError(f"none of {names} in columns {list(frame.columns)}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--tarball", type=Path, help="local SpatialPack_*.tar.gz instead of downloading")
    p.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = p.parse_args(argv)

    blob = args.tarball.read_bytes() if args.tarball else _download()
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
        member = next(m for m in tar.getmembers() if m.name.endswith("data/murray.rda"))
        raw = tar.extractfile(member).read()
    frame = _read_rda(raw)["murray"]
    try:
        s1, s2 = _column(frame, "xpos", "x"), _column(frame, "ypos", "y")
    except KeyError:
        s1, s2 = frame.iloc[:, 2].to_numpy(dtype=float), frame.iloc[:, 3].to_numpy(dtype=float)
    arsenic = _column(frame, "As")
    lead = _column(frame, "Pb")

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("s1,s2,x,y\n")
        for row in zip(s1, s2, arsenic, lead):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"wrote {len(arsenic)} rows to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
