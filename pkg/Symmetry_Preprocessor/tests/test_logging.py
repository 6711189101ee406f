"""
Tests for structured logging
"""
import json
import logging

from preprocessor.logging_config import JSONFormatter, log_stage, pipeline_logger, set_level


class TestJSONFormatter:
    """One JSON object per record"""

    def test_structured_payload(self):
        """Test structured payload"""
        record = logging.LogRecord("pipeline", logging.INFO, __file__, 10, "Stage done", None, None)
        record.extra_data = {"stage": "parse"}
        entry = json.loads(JSONFormatter().format(record))
        assert entry["level"] == "INFO"
        assert entry["logger"] == "pipeline"
        assert entry["message"] == "Stage done"
        assert entry["data"] == {"stage": "parse"}

    def test_log_stage_emits_data(self):
        """Test log stage emits data"""
        records = []

        class Collect(logging.Handler):
            def emit(self, record):
                records.append(record)

        handler = Collect()
        pipeline_logger.addHandler(handler)
        set_level(logging.INFO)
        try:
            log_stage("detect", 12.5, {"generators": 2})
        finally:
            set_level(logging.WARNING)
            pipeline_logger.removeHandler(handler)

        assert len(records) == 1
        assert records[0].extra_data == {"type": "stage", "stage": "detect", "duration_ms": 12.5, "generators": 2}

    def test_quiet_by_default(self):
        """Test quiet by default"""
        records = []

        class Collect(logging.Handler):
            def emit(self, record):
                records.append(record)

        handler = Collect()
        pipeline_logger.addHandler(handler)
        set_level(logging.WARNING)
        try:
            pipeline_logger.info_data("hidden", data={"x": 1})
        finally:
            pipeline_logger.removeHandler(handler)
        assert records == []
