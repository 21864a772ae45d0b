"""Scorer microservice speaking the attribeval scorer wire protocol."""
