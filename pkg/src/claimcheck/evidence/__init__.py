from .bundle import (
    EVIDENCE_VERSION,
    build_bundle,
    bundle_json,
    validate_bundle,
    validate_chart,
    validate_table,
)
from .charts import CHART_KINDS, build_chart, build_context_overlay
from .tables import TABLE_KINDS, build_table
