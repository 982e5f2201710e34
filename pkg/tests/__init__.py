"""Test package."""





