from django.contrib import admin
from django.utils.html import format_html

from .models import CatalogCase, PipelineRun, VerificationRun


def _badge(passed):
    color, label = ("#006400", "PASS") if passed else ("#8B0000", "FAIL")
    return format_html('<span style="color: {}; font-weight: bold;">{}</span>', color, label)


@admin.register(CatalogCase)
class CatalogCaseAdmin(admin.ModelAdmin):
    list_display = ["index", "P", "Q", "form", "erratum_display", "get_run_count"]
    list_filter = ["form"]
    search_fields = ["P", "Q", "z", "notes"]
    readonly_fields = ["created_at", "updated_at"]
    fieldsets = (
        ("Equation", {"fields": ("index", "P", "Q", "z", "form")}),
        (
            "As printed",
            {
                "fields": ("printed_P", "printed_Q", "printed_z", "erratum"),
                "classes": ("collapse",),
            },
        ),
        ("Metadata", {"fields": ("notes", "created_at", "updated_at"), "classes": ("collapse",)}),
    )

    def erratum_display(self, obj):
        if obj.has_erratum:
            return format_html('<span style="color: #FF6347;">{}</span>', "erratum")
        return ""

    erratum_display.short_description = "Printed row"

    def get_run_count(self, obj):
        return format_html("<strong>{}</strong> runs", obj.get_run_count())

    get_run_count.short_description = "Verifications"


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = [
        "kind",
        "case",
        "interval_str",
        "npoints",
        "residual_display",
        "passed_display",
        "created_at",
    ]
    list_filter = ["kind", "passed", "complex_evaluation", "created_at"]
    search_fields = ["expression"]
    date_hierarchy = "created_at"
    readonly_fields = ["created_at"]
    fieldsets = (
        ("Target", {"fields": ("kind", "case", "expression", "parameters")}),
        ("Grid", {"fields": ("interval_start", "interval_end", "npoints", "tolerance")}),
        (
            "Outcome",
            {
                "fields": (
                    "passed",
                    "max_residual",
                    "mean_residual",
                    "excluded_count",
                    "complex_evaluation",
                )
            },
        ),
        ("Report", {"fields": ("report", "created_at"), "classes": ("collapse",)}),
    )

    def residual_display(self, obj):
        if obj.max_residual is None:
            return "-"
        return format_html("{}", f"{obj.max_residual:.3e}")

    residual_display.short_description = "Max residual"

    def passed_display(self, obj):
        return _badge(obj.passed)

    passed_display.short_description = "Result"


@admin.register(PipelineRun)
class PipelineRunAdmin(admin.ModelAdmin):
    list_display = [
        "b",
        "aux_case",
        "ode_mode",
        "strategy",
        "balance_order",
        "equation_count",
        "status",
        "passed_display",
        "created_at",
    ]
    list_filter = ["ode_mode", "strategy", "status", "passed"]
    search_fields = ["pde", "aux_case"]
    date_hierarchy = "created_at"
    readonly_fields = ["created_at"]
    filter_horizontal = ["verifications"]
    fieldsets = (
        ("Problem", {"fields": ("pde", "b", "aux_case", "ode_mode", "strategy")}),
        (
            "Outcome",
            {"fields": ("balance_order", "candidates", "equation_count", "status", "passed")},
        ),
        (
            "Artifacts",
            {"fields": ("output_dir", "result", "verifications"), "classes": ("collapse",)},
        ),
        ("Metadata", {"fields": ("created_at",), "classes": ("collapse",)}),
    )

    def passed_display(self, obj):
        return _badge(obj.passed)

    passed_display.short_description = "Result"
