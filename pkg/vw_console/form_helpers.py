"""
Form Helpers - WTForms without a web framework

Builds a WTForms Form class from the JSON schema in config/config_schema.json.
The command line is converted to a MultiDict and validated through the form,
so every option gets the same coercion and the same error messages.
"""

from collections import OrderedDict

from wtforms import BooleanField, Form, IntegerField, SelectField, StringField
from wtforms.validators import InputRequired, Optional, ValidationError

from twisted_vw.utils import parse_rat, rat_to_str, require_picard, require_prime_rank

FALSE_VALUES = (False, "false", "False", "0", "")


class PositiveRational:
    """Field data must parse as a rational number > 0."""

    def __init__(self, message=None):
        self.message = message

    def __call__(self, form, field):
        try:
            value = parse_rat(field.data)
        except ValueError as e:
            raise ValidationError(self.message or str(e))
        if value <= 0:
            raise ValidationError(self.message or f"must be positive, got {rat_to_str(value)}")


class PrimeRank:
    def __call__(self, form, field):
        try:
            require_prime_rank(field.data)
        except ValueError as e:
            raise ValidationError(str(e))


class PicardNumber:
    def __call__(self, form, field):
        try:
            require_picard(field.data)
        except ValueError as e:
            raise ValidationError(str(e))


def create_field(field_name, field_schema):
    """
    Create a WTForms field based on JSON schema definition.

    Args:
        field_name: Name of the field
        field_schema: JSON schema for this field

    Returns:
        WTForms field instance
    """
    label_text = field_schema.get("title", field_name)
    tooltip_text = field_schema.get("tooltip", "")
    field_type = field_schema.get("type")
    required = field_schema.get("required", False)

    validators = [InputRequired() if required else Optional()]
    if field_schema.get("x-rational"):
        validators.append(PositiveRational())
    if field_schema.get("x-prime"):
        validators.append(PrimeRank())
    if field_schema.get("x-picard"):
        validators.append(PicardNumber())

    # Enum select fields; integer enums coerce their choices
    if field_schema.get("enum"):
        coerce = int if field_type == "integer" else str
        choices = [(val, str(val)) for val in field_schema["enum"]]
        f = SelectField(
            label=label_text, description=tooltip_text, choices=choices, coerce=coerce, validators=validators
        )

    elif field_type == "integer":
        f = IntegerField(label=label_text, description=tooltip_text, validators=validators)

    elif field_type == "boolean":
        f = BooleanField(label=label_text, description=tooltip_text, false_values=FALSE_VALUES)

    else:
        f = StringField(label=label_text, description=tooltip_text, validators=validators)

    f.description = tooltip_text
    return f


def generate_form_class_from_schema(schema):
    """Dynamically generate a WTForms Form class from a JSON schema."""
    attrs = OrderedDict()
    required_fields = schema.get("required", [])
    for prop, subschema in schema.get("properties", {}).items():
        subschema = dict(subschema, required=prop in required_fields)
        attrs[prop] = create_field(prop, subschema)

    class ConfigForm(Form):
        pass

    return type("ConfigForm", (ConfigForm,), attrs)


def form_errors_text(form) -> str:
    """Flatten form.errors into 'field: message' pairs."""
    parts = []
    for name, messages in form.errors.items():
        label = form[name].label.text if name in form else name
        for message in messages:
            parts.append(f"{label} ({name}): {message}")
    return "; ".join(parts)
