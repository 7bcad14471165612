# Servicios de dominio: aritmética, endomorfismos y oráculos
