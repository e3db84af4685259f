"""The postpartum cohort schema: extrinsic, intrinsic and outcome variables."""

from __future__ import annotations

from .tabular import Categorical, Column, Continuous, Schema

NO_YES = ("No", "Yes")


def _cat(name, role, levels, description=""):
    return Column(name, Categorical(tuple(levels)), role, description)


def _num(name, role, unit="", description=""):
    return Column(name, Continuous(unit), role, description)


EXTRINSIC = (
    _num("AGE", "extrinsic", "years", "Patient's age"),
    _num("NUM_LABOURS", "extrinsic", "", "Number of labors"),
    _cat("DIC_NULLIPAROUS", "extrinsic", ("No previous labors", "With previous labors"),
         "Number of labors (dichotomous)"),
    _num("HEIGHT", "extrinsic", "cm", "Patient's height"),
    _num("WEIGHT", "extrinsic", "kg", "Patient's weight"),
    _num("BMI", "extrinsic", "", "Patient's BMI"),
    _cat("CAT_BMI", "extrinsic", ("Underweight", "Normal-weight", "Overweight"), "Patient's BMI category"),
    _num("EXTRA_KG", "extrinsic", "kg", "Kg gained during pregnancy"),
    _cat("CAT_EXTRAKG", "extrinsic", ("10 kg or less", "11 to 15", "16 to 20", "21 to 25"),
         "Category according to kg gained during pregnancy"),
    _cat("LABOUR_PREP", "extrinsic", ("Without help", "With help"), "How the preparation for labor went"),
    _cat("PROF_CHBPR", "extrinsic", ("No", "Midwife", "Midwife and Physiotherapy"),
         "Professional who assisted in the preparation of the labor"),
    _cat("PA_PREV", "extrinsic", NO_YES, "Previous physical activity undertaken"),
    _cat("FREQ_PAPREV", "extrinsic", ("No", "1 to 3 times a week", "more than 3 times a week"),
         "Frequency of previous physical activity"),
    _cat("IPAQ", "extrinsic", ("Low", "Moderate", "Vigorous"), "IPAQ score"),
    _cat("WALKING", "extrinsic", NO_YES, "Walked during the pregnancy"),
    _cat("STRENGTH", "extrinsic", NO_YES, "Strength training"),
    _cat("PILATES", "extrinsic", NO_YES, "Pilates training"),
    _cat("AQUAGYM", "extrinsic", NO_YES, "Aquagym training"),
    _num("NUM_PA", "extrinsic", "", "Number of physical activities carried out"),
)

INTRINSIC = (
    _num("WEEK_LABOUR", "intrinsic", "weeks", "Week of labor"),
    _cat("INJURY", "intrinsic", NO_YES, "Was the patient injured?"),
    _cat("EPISIOTOMY", "intrinsic", NO_YES),
    _cat("TEARING", "intrinsic", ("No", "Slight", "Moderate"), "Did the patient have a tear?"),
    _num("DURATION", "intrinsic", "hours", "Duration of labor"),
    _cat("LITOTHOMY", "intrinsic", NO_YES),
    _cat("POSTURE", "intrinsic", ("Lithotomy", "Side", "Sitting / squatting", "Standing"),
         "Patient's posture during labor"),
    _cat("ANALGESIA", "intrinsic", NO_YES, "Did the patient have analgesia?"),
    _cat("TYPE_ANALGESIA", "intrinsic", ("No", "Local", "Epidural", "Espinal"), "Type of analgesia"),
    _cat("TYPE_LABOUR", "intrinsic", ("Euthocic", "Forceps/Spatulae", "Vacuum cups"),
         "Type of labor and assistive devices"),
    _cat("KRISTELLER", "intrinsic", NO_YES),
    _num("WEIGHT_BABY", "intrinsic", "g", "Weight of the baby"),
)

# The stress outcome is printed as UI_STRESS in the variable table and STRESS_UI
# everywhere else; STRESS_UI is canonical here.
OUTCOMES = (
    _num("VAS_PERINE", "outcome", "", "Perineal pain at week 6 postpartum (visual analogue scale)"),
    _cat("UI", "outcome", NO_YES, "Did the patient have urinary incontinence?"),
    _cat("FREQ_UI", "outcome", ("No", "Sporadic", "Daily"), "Frequency of urinary incontinence"),
    _cat("INT_UI", "outcome", ("No", "Mild", "Moderate", "Severe"), "Intensity of urinary incontinence"),
    _cat("AFFECT_UI", "outcome", NO_YES),
    _cat("BLADD_HYPER", "outcome", NO_YES, "Did the patient have bladder hyperactivity"),
    _cat("STRESS_UI", "outcome", NO_YES, "Was the incontinence provoked by exertion?"),
    _cat("UI_PREV", "outcome", ("No", "bladder hyperactivity", "stress"),
         "Did you previously have urinary incontinence?"),
)

CLINICAL_SCHEMA = Schema(EXTRINSIC + INTRINSIC + OUTCOMES)
