"""CSV, SVG and manifest outputs."""
from .csv_io import read_trace_csv, write_aggregate_csv, write_trace_csv
from .figures import write_plots, write_report
from .manifest import RunManifest, build_manifest, verify_manifest, write_manifest
from .svg import emit_svg
