# Package marker so test modules can import tests.helpers.
