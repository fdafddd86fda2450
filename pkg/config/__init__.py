"""Configuration package initialization"""