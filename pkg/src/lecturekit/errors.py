"""Exception hierarchy shared by all lecturekit modules.

Every error carries a stable ``code`` (used by the HTTP layer) and an
``http_status`` so the service can map any module failure to exactly one
API error shape.
"""

from __future__ import annotations


class LectureKitError(Exception):
    """Base class for all typed lecturekit failures."""

    code = "internal_error"
    http_status = 500

    def detail(self) -> dict:
        """Structured payload for API error bodies. Subclasses may extend."""
        return {}


# --- bundle -----------------------------------------------------------------

class BundleError(LectureKitError):
    code = "bundle_error"
    http_status = 500


class MissingManifest(BundleError):
    code = "missing_manifest"
    http_status = 404

    def __init__(self, path: str) -> None:
        super().__init__(f"no manifest file found under {path}")
        self.path = path

    def detail(self) -> dict:
        return {"path": self.path}


class SchemaViolation(BundleError):
    code = "schema_violation"
    http_status = 400

    def __init__(self, field: str, reason: str) -> None:
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason

    def detail(self) -> dict:
        return {"field": self.field, "reason": self.reason}


class DanglingReference(BundleError):
    code = "dangling_reference"
    http_status = 400

    def __init__(self, ref: str) -> None:
        super().__init__(f"referenced file does not exist: {ref}")
        self.ref = ref

    def detail(self) -> dict:
        return {"ref": self.ref}


class BundleIoError(BundleError):
    code = "bundle_io_error"
    http_status = 500


# --- quiz item validation ---------------------------------------------------

class QuizItemError(LectureKitError):
    code = "quiz_item_error"
    http_status = 400


class MissingField(QuizItemError):
    code = "quiz_missing_field"

    def __init__(self, name: str) -> None:
        super().__init__(f"quiz item is missing required field {name!r}")
        self.name = name

    def detail(self) -> dict:
        return {"field": self.name}


class BadEnum(QuizItemError):
    code = "quiz_bad_enum"

    def __init__(self, field: str, value: object) -> None:
        super().__init__(f"quiz item field {field!r} has unsupported value {value!r}")
        self.field = field
        self.value = value

    def detail(self) -> dict:
        return {"field": self.field, "value": repr(self.value)}


class AnswerNotInOptions(QuizItemError):
    code = "quiz_answer_not_in_options"

    def __init__(self, answer: str, options: list[str]) -> None:
        super().__init__(f"correctAnswer {answer!r} is not one of the options")
        self.answer = answer
        self.options = options


class InvalidOptions(QuizItemError):
    code = "quiz_invalid_options"

    def __init__(self, reason: str) -> None:
        super().__init__(reason)


# --- llm gateway ------------------------------------------------------------

class GatewayError(LectureKitError):
    code = "gateway_error"
    http_status = 502


class UnboundPlaceholder(GatewayError):
    code = "unbound_placeholder"
    http_status = 400

    def __init__(self, name: str) -> None:
        super().__init__(f"template placeholder {name!r} has no binding")
        self.name = name

    def detail(self) -> dict:
        return {"placeholder": self.name}


class NoJsonFound(GatewayError):
    code = "no_json_found"

    def __init__(self, message: str = "no JSON value found in provider reply") -> None:
        super().__init__(message)


class MultipleJsonValues(GatewayError):
    code = "multiple_json_values"

    def __init__(self, count: int) -> None:
        super().__init__(f"provider reply contains {count} top-level JSON values, expected 1")
        self.count = count


class SchemaMismatch(GatewayError):
    code = "schema_mismatch"

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"reply does not match schema at {path or '$'}: {reason}")
        self.path = path
        self.reason = reason

    def detail(self) -> dict:
        return {"path": self.path, "reason": self.reason}


class AttachmentNotAllowed(GatewayError):
    code = "attachment_not_allowed"
    http_status = 400

    def __init__(self, template_id: str) -> None:
        super().__init__(f"template {template_id!r} does not accept image attachments")
        self.template_id = template_id


class ProviderUnavailable(GatewayError):
    code = "provider_unavailable"


class BudgetExceeded(GatewayError):
    code = "budget_exceeded"
    http_status = 429


class PersistentSchemaMismatch(GatewayError):
    code = "persistent_schema_mismatch"

    def __init__(self, last: SchemaMismatch | NoJsonFound | MultipleJsonValues) -> None:
        super().__init__(f"provider kept returning malformed replies: {last}")
        self.last = last


# --- preprocess pipeline ----------------------------------------------------

class PipelineError(LectureKitError):
    code = "pipeline_error"


class VideoUnreadable(PipelineError):
    code = "video_unreadable"
    http_status = 400

    def __init__(self, ref: str, reason: str = "") -> None:
        super().__init__(f"cannot read video {ref}" + (f": {reason}" if reason else ""))
        self.ref = ref


class TranscriptError(PipelineError):
    code = "transcript_error"
    http_status = 400

    def __init__(self, ref: str, reason: str) -> None:
        super().__init__(f"cannot use transcript {ref}: {reason}")
        self.ref = ref
        self.reason = reason


class ExtractionToolMissing(PipelineError):
    code = "extraction_tool_missing"

    def __init__(self, tool: str) -> None:
        super().__init__(f"frame extraction tool not available: {tool}")
        self.tool = tool


class StageError(PipelineError):
    """Wraps any failure inside build_bundle, annotated with the stage name."""

    code = "stage_error"

    def __init__(self, stage: str, cause: Exception) -> None:
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause

    def detail(self) -> dict:
        return {"stage": self.stage, "cause": str(self.cause)}


class PartialQuizBank(PipelineError):
    """Quiz generation died partway; carries the levels that did succeed."""

    code = "partial_quiz_bank"

    def __init__(self, level: int, partial: dict, cause: Exception) -> None:
        super().__init__(f"quiz generation failed at level {level}: {cause}")
        self.level = level
        self.partial = partial
        self.cause = cause


# --- layout engine ----------------------------------------------------------

class LayoutError(LectureKitError):
    code = "layout_error"


class ImageUndecodable(LayoutError):
    code = "image_undecodable"
    http_status = 400

    def __init__(self, ref: str) -> None:
        super().__init__(f"cannot decode image: {ref}")
        self.ref = ref


class NoFreeRegion(LayoutError):
    code = "no_free_region"

    def __init__(self, min_cells: int) -> None:
        super().__init__(f"no free region with at least {min_cells} cells")
        self.min_cells = min_cells


# --- media providers --------------------------------------------------------

class MediaError(LectureKitError):
    code = "media_error"
    http_status = 502


class AvatarSessionUnavailable(MediaError):
    code = "avatar_session_unavailable"


class SearchUnavailable(MediaError):
    code = "search_unavailable"


class EmptyResults(MediaError):
    code = "empty_results"
    http_status = 404

    def __init__(self, keywords: str) -> None:
        super().__init__(f"no images found for {keywords!r}")
        self.keywords = keywords


# --- session engine ---------------------------------------------------------

class SessionError(LectureKitError):
    code = "session_error"
    http_status = 400


class IllegalTransition(SessionError):
    code = "illegal_transition"
    http_status = 409

    def __init__(self, mode: str, op: str) -> None:
        super().__init__(f"operation {op!r} is not allowed in mode {mode!r}")
        self.mode = mode
        self.op = op

    def detail(self) -> dict:
        return {"mode": self.mode, "op": self.op}


class PreconditionFailed(SessionError):
    code = "precondition_failed"
    http_status = 400


class EmptyBankLevel(SessionError):
    """No quiz items at any level for the requested section."""

    code = "empty_bank"
    http_status = 404


# --- summary builder --------------------------------------------------------

class OrphanRecord(LectureKitError):
    code = "orphan_record"
    http_status = 400

    def __init__(self, section_id: str) -> None:
        super().__init__(f"interaction record references unknown section {section_id!r}")
        self.section_id = section_id
