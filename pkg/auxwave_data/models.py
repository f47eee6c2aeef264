from django.core.validators import MaxValueValidator, MinValueValidator
from django.db import models


class CatalogCase(models.Model):
    """
    One row of the auxiliary-equation catalog.
    Stores the consistent transcription used for computation next to the printed one.
    """

    index = models.PositiveSmallIntegerField(
        unique=True,
        validators=[MinValueValidator(1), MaxValueValidator(20)],
        help_text="Catalog case number (1-20)",
    )
    P = models.TextField(help_text="Linear coefficient P(xi)")
    Q = models.TextField(help_text="Nonlinear coefficient Q(xi)")
    z = models.TextField(help_text="Solution z(xi) in the expression grammar")
    printed_P = models.TextField(blank=True, help_text="P as printed, when it differs")
    printed_Q = models.TextField(blank=True, help_text="Q as printed, when it differs")
    printed_z = models.TextField(blank=True, help_text="z as printed, when it differs")
    form = models.CharField(
        max_length=20,
        choices=[("closed", "Closed form"), ("quadrature", "Quadrature")],
        help_text="Whether z contains an unevaluated integral",
    )
    notes = models.TextField(blank=True)
    erratum = models.TextField(blank=True, help_text="Why the printed row is not used")
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ["index"]
        verbose_name = "Catalog Case"
        verbose_name_plural = "Catalog Cases"

    def __str__(self):
        return f"Case {self.index}: z' = ({self.P})*z + ({self.Q})*z^2"

    @property
    def has_erratum(self):
        return bool(self.erratum)

    def get_run_count(self):
        return self.verification_runs.count()


class VerificationRun(models.Model):
    """
    Result of one residual check: an aux solution, a travelling-wave ODE or the PDE.
    """

    KIND_CHOICES = [
        ("aux", "Auxiliary equation"),
        ("ode", "Travelling-wave ODE"),
        ("pde", "Partial differential equation"),
        ("classical", "Classical Bernoulli"),
    ]

    kind = models.CharField(max_length=20, choices=KIND_CHOICES)
    case = models.ForeignKey(
        CatalogCase,
        on_delete=models.SET_NULL,
        related_name="verification_runs",
        null=True,
        blank=True,
    )
    expression = models.TextField(blank=True, help_text="Checked expression")
    parameters = models.JSONField(default=dict, help_text="Parameter bindings as text")
    interval_start = models.FloatField()
    interval_end = models.FloatField()
    npoints = models.PositiveIntegerField()
    tolerance = models.FloatField()
    max_residual = models.FloatField(null=True, blank=True)
    mean_residual = models.FloatField(null=True, blank=True)
    passed = models.BooleanField(default=False)
    excluded_count = models.PositiveIntegerField(default=0)
    complex_evaluation = models.BooleanField(default=False)
    report = models.JSONField(default=dict, help_text="Full residual report")
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "Verification Run"
        verbose_name_plural = "Verification Runs"
        indexes = [
            models.Index(fields=["kind", "passed"], name="auxwave_run_kind_passed_idx"),
            models.Index(fields=["created_at"], name="auxwave_run_created_idx"),
        ]

    def __str__(self):
        verdict = "pass" if self.passed else "fail"
        target = f"case {self.case.index}" if self.case else self.kind
        return f"{target} on [{self.interval_start:g}, {self.interval_end:g}]: {verdict}"

    @property
    def interval_str(self):
        return f"[{self.interval_start:g}, {self.interval_end:g}]"


class PipelineRun(models.Model):
    """
    One end-to-end run of the method on a PDE: reduction, balance, system, solutions.
    """

    STATUS_CHOICES = [
        ("derived", "System derived"),
        ("exported", "System exported"),
        ("unsolved", "No assignment found"),
        ("pointwise", "Pointwise report"),
        ("solved", "Solved"),
    ]

    pde = models.TextField(help_text="The PDE in the expression grammar")
    b = models.CharField(max_length=50, blank=True, help_text="b-equation parameter")
    aux_case = models.CharField(max_length=20)
    ode_mode = models.CharField(
        max_length=20,
        choices=[("mechanical", "Mechanical"), ("paper-eq8", "Printed reduction")],
    )
    strategy = models.CharField(max_length=20)
    balance_order = models.PositiveIntegerField(null=True, blank=True)
    candidates = models.JSONField(default=list)
    equation_count = models.PositiveIntegerField(default=0)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default="derived")
    passed = models.BooleanField(default=False)
    output_dir = models.CharField(max_length=500, blank=True)
    result = models.JSONField(default=dict, help_text="Pipeline result document")
    verifications = models.ManyToManyField(
        VerificationRun, related_name="pipeline_runs", blank=True
    )
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "Pipeline Run"
        verbose_name_plural = "Pipeline Runs"

    def __str__(self):
        return f"b={self.b} case {self.aux_case} ({self.ode_mode}, {self.strategy}): {self.status}"
